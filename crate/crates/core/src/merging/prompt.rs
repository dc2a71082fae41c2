//! Three-hop merge prompt and the `MERGE:` / `TEMPLATE:` reply protocol.

use crate::template::{matches_with_runs, Template};

use super::{CandidatePair, MergeDecision};

/// Section headers of the prompt, in the order they must appear.
pub const HOP_MARKERS: [&str; 3] = ["[Hop 1: Structure]", "[Hop 2: Semantics]", "[Hop 3: Solution]"];

#[derive(Debug, Clone, PartialEq)]
pub struct PromptBundle<T> {
    pub pair: CandidatePair<T>,
    pub hop_texts: [String; 3],
    pub rendered: String,
}

/// Renders the prompt for a pair. Pure: the same pair always renders the
/// same bytes.
pub fn build_prompt<T: Clone>(pair: &CandidatePair<T>) -> PromptBundle<T> {
    let a = pair.template_a.text();
    let b = pair.template_b.text();

    let hop_texts = [
        format!(
            "{}\nFor each template, walk through its tokens from left to right and label every \
             token as CONSTANT (fixed text written by the developer) or VARIABLE (a <*> \
             wildcard or a value that changes between messages). Template A has {} tokens and \
             Template B has {} tokens. Point out where the two token structures line up and \
             where the extra tokens of the longer template sit.",
            HOP_MARKERS[0],
            pair.template_a.length(),
            pair.template_b.length(),
        ),
        format!(
            "{}\nUsing the structure from Hop 1, state in one sentence which system event each \
             template records. Then decide whether both templates come from the same logging \
             statement, so that the length difference is explained only by a variable that \
             spans a different number of tokens.",
            HOP_MARKERS[1],
        ),
        format!(
            "{}\nGive the final verdict. Finish your answer with exactly one line \
             `MERGE: yes` or `MERGE: no`. If the verdict is yes, add one more line \
             `TEMPLATE: <unified template>` where the unified template writes every variable \
             part as a single <*> and covers every message of both templates.",
            HOP_MARKERS[2],
        ),
    ];

    let rendered = format!(
        "You are an expert in log parsing. Two log templates of different lengths were \
         extracted from the same system. Variable tokens are written as <*>.\n\
         \n\
         Template A: \"{a}\"\n\
         Template B: \"{b}\"\n\
         \n\
         Reason in three hops before answering.\n\
         \n\
         {}\n\
         \n\
         {}\n\
         \n\
         {}\n",
        hop_texts[0], hop_texts[1], hop_texts[2],
    );

    PromptBundle {
        pair: pair.clone(),
        hop_texts,
        rendered,
    }
}

/// Parses a judge reply. The last `MERGE:` line wins; `yes` additionally
/// needs a later `TEMPLATE:` line whose template covers both sources. Any
/// failure is a conservative no-merge.
pub fn parse_decision<T>(completion: &str, pair: &CandidatePair<T>) -> MergeDecision {
    let lines: Vec<&str> = completion.lines().collect();
    let verdict = lines
        .iter()
        .enumerate()
        .rev()
        .find_map(|(i, l)| field_value(l, "merge:").map(|v| (i, v)));

    let Some((at, value)) = verdict else {
        return MergeDecision::no(completion);
    };
    let word = value
        .split_whitespace()
        .next()
        .unwrap_or("")
        .trim_matches(|c: char| !c.is_ascii_alphanumeric())
        .to_ascii_lowercase();
    if word != "yes" {
        return MergeDecision::no(completion);
    }

    let unified = lines[at + 1..]
        .iter()
        .find_map(|l| field_value(l, "template:"))
        .map(|v| {
            v.trim()
                .trim_matches(|c| c == '`' || c == '"')
                .split_whitespace()
                .map(String::from)
                .collect::<Vec<_>>()
        });

    match unified {
        Some(tokens) if validate_unified(&tokens, pair) => MergeDecision::yes(tokens, completion),
        _ => MergeDecision::no(completion),
    }
}

/// The unified template must cover both source templates under run
/// semantics. A source wildcard can only be covered by a unified wildcard,
/// so coverage of the templates implies coverage of their members.
pub fn validate_unified<T>(unified: &[String], pair: &CandidatePair<T>) -> bool {
    !unified.is_empty() && covers(unified, &pair.template_a) && covers(unified, &pair.template_b)
}

fn covers(unified: &[String], source: &Template) -> bool {
    matches_with_runs(unified, &source.tokens)
}

/// Value after a case-insensitive `key` at the start of a line, ignoring
/// leading markdown decoration.
fn field_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let l = line.trim_start_matches(|c: char| c.is_whitespace() || matches!(c, '*' | '`' | '#' | '-' | '>'));
    let head = l.get(..key.len())?;
    if head.eq_ignore_ascii_case(key) {
        Some(l[key.len()..].trim_start_matches(|c: char| c.is_whitespace() || c == '*'))
    } else {
        None
    }
}
