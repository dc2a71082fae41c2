//! Cross-length template merging.
//!
//! Templates of different lengths that share their constant tokens are
//! paired up, each pair is judged (by a language model behind a
//! [`CompletionBackend`] or by the deterministic [`OfflineJudge`]), and the
//! accepted merges are folded into the template set.

mod backend;
mod oracle;
mod prompt;

use std::collections::{BTreeMap, BTreeSet, HashSet};

pub use backend::{
    complete_with_retry, decide_all, CompletionBackend, HttpChatBackend, HttpChatSettings, LlmJudge, MergeJudge,
    OfflineJudge, RetryPolicy,
};
pub use oracle::{collapse_wildcard_runs, offline_merge_oracle};
pub use prompt::{build_prompt, parse_decision, validate_unified, PromptBundle, HOP_MARKERS};

use crate::preprocessing::WILDCARD;
use crate::sampling::jaccard_of_sets;
use crate::scalar::Scalar;
use crate::template::{EventId, Template};

/// Two templates of different lengths that may describe one event.
/// `template_a` is always the shorter one.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePair<T> {
    pub template_a: Template,
    pub template_b: Template,
    pub similarity: T,
}

impl<T: Scalar> CandidatePair<T> {
    /// Orders the two templates canonically (shorter first). Returns `None`
    /// for equal lengths or when neither template has a constant token.
    pub fn new(x: &Template, y: &Template) -> Option<Self> {
        if x.length() == y.length() {
            return None;
        }
        let (a, b) = if x.length() < y.length() { (x, y) } else { (y, x) };
        let similarity = constant_similarity(a, b)?;
        Some(CandidatePair {
            template_a: a.clone(),
            template_b: b.clone(),
            similarity,
        })
    }
}

/// Jaccard similarity of the two templates' constant-token sets.
pub fn constant_similarity<T: Scalar>(a: &Template, b: &Template) -> Option<T> {
    let sa: BTreeSet<&str> = a.constants().collect();
    let sb: BTreeSet<&str> = b.constants().collect();
    jaccard_of_sets(&sa, &sb).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeDecision {
    pub merge: bool,
    /// Present iff `merge`.
    pub unified_template: Option<Vec<String>>,
    /// Raw judge output, kept for auditing.
    pub rationale: String,
}

impl MergeDecision {
    pub fn no(rationale: impl Into<String>) -> Self {
        MergeDecision {
            merge: false,
            unified_template: None,
            rationale: rationale.into(),
        }
    }

    pub fn yes(unified: Vec<String>, rationale: impl Into<String>) -> Self {
        MergeDecision {
            merge: true,
            unified_template: Some(unified),
            rationale: rationale.into(),
        }
    }
}

/// All cross-length pairs whose constant-token similarity is at least
/// `min_similarity`, most similar first, then by event id pair.
pub fn find_candidate_pairs<T: Scalar>(templates: &[Template], min_similarity: T) -> Vec<CandidatePair<T>> {
    let mut pairs: Vec<CandidatePair<T>> = Vec::new();
    for (i, x) in templates.iter().enumerate() {
        for y in &templates[i + 1..] {
            if let Some(pair) = CandidatePair::new(x, y) {
                if pair.similarity >= min_similarity {
                    pairs.push(pair);
                }
            }
        }
    }
    pairs.sort_by(|p, q| {
        q.similarity
            .partial_cmp(&p.similarity)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| p.template_a.event_id.cmp(&q.template_a.event_id))
            .then_with(|| p.template_b.event_id.cmp(&q.template_b.event_id))
    });
    pairs
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeOutcome {
    pub templates: Vec<Template>,
    /// Every consumed event id mapped to the id that now stands for it.
    pub remap: BTreeMap<EventId, EventId>,
    pub merges_applied: usize,
}

impl MergeOutcome {
    /// The surviving id for `id` (itself if it was never consumed).
    pub fn resolve<'a>(&'a self, id: &'a EventId) -> &'a EventId {
        let mut cur = id;
        while let Some(next) = self.remap.get(cur) {
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }
}

/// Applies positive decisions in candidate order. A template consumed by an
/// earlier merge makes every later pair that mentions it a no-op.
pub fn apply_merges<T>(
    templates: &[Template],
    pairs: &[CandidatePair<T>],
    decisions: &[MergeDecision],
) -> MergeOutcome {
    let mut current: Vec<Option<Template>> = templates.iter().cloned().map(Some).collect();
    let mut index: BTreeMap<EventId, usize> = templates
        .iter()
        .enumerate()
        .map(|(i, t)| (t.event_id.clone(), i))
        .collect();
    let mut consumed: HashSet<EventId> = HashSet::new();
    let mut remap = BTreeMap::new();
    let mut merges_applied = 0;

    for (pair, decision) in pairs.iter().zip(decisions) {
        let Some(unified) = decision.unified_template.as_ref().filter(|_| decision.merge) else {
            continue;
        };
        let (ida, idb) = (&pair.template_a.event_id, &pair.template_b.event_id);
        if consumed.contains(ida) || consumed.contains(idb) {
            continue;
        }
        let (Some(&ia), Some(&ib)) = (index.get(ida), index.get(idb)) else {
            continue;
        };
        let support = current[ia].as_ref().map_or(0, |t| t.support) + current[ib].as_ref().map_or(0, |t| t.support);
        let merged = Template::merged(unified.clone(), support);
        let new_id = merged.event_id.clone();

        current[ia] = None;
        current[ib] = None;
        index.remove(ida);
        index.remove(idb);
        for old in [ida, idb] {
            consumed.insert(old.clone());
            if *old != new_id {
                remap.insert(old.clone(), new_id.clone());
            }
        }

        match index.get(&new_id) {
            // the unified text already exists as another live template
            Some(&existing) => {
                if let Some(t) = current[existing].as_mut() {
                    t.support += support;
                    t.variable_length = true;
                }
            }
            None => {
                let slot = ia.min(ib);
                current[slot] = Some(merged);
                index.insert(new_id, slot);
            }
        }
        merges_applied += 1;
    }

    MergeOutcome {
        templates: current.into_iter().flatten().collect(),
        remap,
        merges_applied,
    }
}

pub(crate) fn is_wildcard(t: &str) -> bool {
    t == WILDCARD
}
