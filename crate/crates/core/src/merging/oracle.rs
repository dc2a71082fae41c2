use crate::preprocessing::WILDCARD;

use super::prompt::validate_unified;
use super::{is_wildcard, CandidatePair, MergeDecision};

/// Collapses every run of consecutive wildcards into one wildcard.
pub fn collapse_wildcard_runs<S: AsRef<str>>(tokens: &[S]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    for t in tokens {
        let t = t.as_ref();
        if is_wildcard(t) && out.last().is_some_and(|l| is_wildcard(l)) {
            continue;
        }
        out.push(t.to_string());
    }
    out
}

/// Rule-based merge judge.
///
/// Merges when both templates carry the same constant tokens in the same
/// order. The unified template is the longer one with wildcard runs
/// collapsed, and it must cover both sources under run semantics.
pub fn offline_merge_oracle<T>(pair: &CandidatePair<T>) -> MergeDecision {
    let (short, long) = (&pair.template_a, &pair.template_b);
    let cs: Vec<&str> = short.constants().collect();
    let cl: Vec<&str> = long.constants().collect();

    if !is_subsequence(&cs, &cl) {
        return MergeDecision::no("offline: constants of the shorter template are not an ordered subsequence");
    }
    // with cs a subsequence of cl, equal sets reduce to: every constant of
    // the longer template also occurs in the shorter one
    if !cl.iter().all(|t| cs.contains(t)) {
        return MergeDecision::no("offline: constant token sets differ");
    }
    let unified = collapse_wildcard_runs(&long.tokens);
    if !unified.iter().any(|t| t == WILDCARD) {
        return MergeDecision::no("offline: no wildcard to absorb the length difference");
    }
    if !validate_unified(&unified, pair) {
        return MergeDecision::no("offline: collapsed template does not cover both sources");
    }
    let rationale = format!("offline: merged into `{}`", unified.join(" "));
    MergeDecision::yes(unified, rationale)
}

fn is_subsequence(needle: &[&str], hay: &[&str]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}
