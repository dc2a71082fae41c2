//! Template extraction from clusters: LCS divergence plus positional entropy
//! decides which positions become wildcards.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clustering::Cluster;
use crate::preprocessing::{LogRecord, WILDCARD};
use crate::scalar::{entropy_from_counts, Scalar};

/// Content-derived template identifier: identical token sequences always get
/// the same id, on any machine.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(String);

impl EventId {
    pub fn for_tokens<S: AsRef<str>>(tokens: &[S]) -> Self {
        let mut h = Sha256::new();
        for (i, t) in tokens.iter().enumerate() {
            if i > 0 {
                h.update([0x1f]);
            }
            h.update(t.as_ref().as_bytes());
        }
        let digest = h.finalize();
        let hex: String = digest[..4].iter().map(|b| format!("{b:02x}")).collect();
        EventId(format!("E{hex}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for EventId {
    fn from(s: &str) -> Self {
        EventId(s.to_string())
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub event_id: EventId,
    pub tokens: Vec<String>,
    pub support: usize,
    /// Set on merged templates: each wildcard may absorb a run of one or
    /// more tokens instead of exactly one.
    pub variable_length: bool,
}

impl Template {
    pub fn new(tokens: Vec<String>, support: usize) -> Self {
        Template {
            event_id: EventId::for_tokens(&tokens),
            tokens,
            support,
            variable_length: false,
        }
    }

    pub fn merged(tokens: Vec<String>, support: usize) -> Self {
        Template {
            variable_length: true,
            ..Template::new(tokens, support)
        }
    }

    pub fn length(&self) -> usize {
        self.tokens.len()
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }

    pub fn wildcard_count(&self) -> usize {
        self.tokens.iter().filter(|t| *t == WILDCARD).count()
    }

    /// Constant (non-wildcard) tokens in order.
    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str).filter(|t| *t != WILDCARD)
    }

    pub fn matches<S: AsRef<str>>(&self, tokens: &[S]) -> bool {
        if self.variable_length {
            matches_with_runs(&self.tokens, tokens)
        } else {
            matches_positional(&self.tokens, tokens)
        }
    }
}

/// Same length, constants equal, wildcards match any single token.
pub fn matches_positional<P: AsRef<str>, S: AsRef<str>>(pattern: &[P], tokens: &[S]) -> bool {
    pattern.len() == tokens.len()
        && pattern
            .iter()
            .zip(tokens)
            .all(|(p, t)| p.as_ref() == WILDCARD || p.as_ref() == t.as_ref())
}

/// Constants must match in order; each wildcard absorbs one or more tokens.
pub fn matches_with_runs<P: AsRef<str>, S: AsRef<str>>(pattern: &[P], tokens: &[S]) -> bool {
    // reachable[j]: pattern prefix consumed so far can end right before token j
    let n = tokens.len();
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for p in pattern {
        let mut next = vec![false; n + 1];
        if p.as_ref() == WILDCARD {
            let mut open = false;
            for j in 0..n {
                open |= reachable[j];
                if open {
                    next[j + 1] = true;
                }
            }
        } else {
            for j in 0..n {
                if reachable[j] && tokens[j].as_ref() == p.as_ref() {
                    next[j + 1] = true;
                }
            }
        }
        reachable = next;
        if !reachable.iter().any(|&r| r) {
            return false;
        }
    }
    reachable[n]
}

/// LCS of two sequences. Among optimal answers, the one matching the
/// earliest positions of `a` is returned.
pub fn lcs_pair<'s, A: AsRef<str>, B: AsRef<str>>(a: &'s [A], b: &[B]) -> Vec<&'s str> {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return Vec::new();
    }
    // suffix table: dp[i][j] = LCS length of a[i..], b[j..]
    let w = m + 1;
    let mut dp = vec![0u32; (n + 1) * w];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            dp[i * w + j] = if a[i].as_ref() == b[j].as_ref() {
                dp[(i + 1) * w + j + 1] + 1
            } else {
                dp[(i + 1) * w + j].max(dp[i * w + j + 1])
            };
        }
    }
    let mut out = Vec::with_capacity(dp[0] as usize);
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if a[i].as_ref() == b[j].as_ref() && dp[i * w + j] == dp[(i + 1) * w + j + 1] + 1 {
            out.push(a[i].as_ref());
            i += 1;
            j += 1;
        } else if dp[i * w + j + 1] == dp[i * w + j] {
            j += 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Folds [`lcs_pair`] over the sequences in the given order.
pub fn longest_common_subsequence<S: AsRef<str>>(sequences: &[&[S]]) -> Vec<String> {
    let Some((first, rest)) = sequences.split_first() else {
        return Vec::new();
    };
    let mut acc: Vec<String> = first.iter().map(|t| t.as_ref().to_string()).collect();
    for s in rest {
        if acc.is_empty() {
            break;
        }
        acc = lcs_pair(&acc, s).into_iter().map(str::to_string).collect();
    }
    acc
}

/// Positions of `member` left unconsumed by a greedy left-to-right embedding
/// of `lcs`.
pub fn divergent_positions<M: AsRef<str>, L: AsRef<str>>(member: &[M], lcs: &[L]) -> BTreeSet<usize> {
    let mut next = 0;
    let mut out = BTreeSet::new();
    for (pos, tok) in member.iter().enumerate() {
        if next < lcs.len() && tok.as_ref() == lcs[next].as_ref() {
            next += 1;
        } else {
            out.insert(pos);
        }
    }
    out
}

/// Token distribution at one position across a cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionProfile<T> {
    pub position: usize,
    pub frequencies: BTreeMap<String, usize>,
    pub total: usize,
    pub entropy: T,
    pub diverges_from_lcs: bool,
}

impl<T: Scalar> PositionProfile<T> {
    pub fn token_set(&self) -> impl Iterator<Item = &str> {
        self.frequencies.keys().map(String::as_str)
    }

    pub fn distinct(&self) -> usize {
        self.frequencies.len()
    }

    pub fn has_wildcard(&self) -> bool {
        self.frequencies.contains_key(WILDCARD)
    }

    /// Most frequent token, ties to the lexicographically smallest.
    pub fn majority_token(&self) -> Option<&str> {
        self.frequencies
            .iter()
            .max_by(|(ta, ca), (tb, cb)| ca.cmp(cb).then(tb.cmp(ta)))
            .map(|(t, _)| t.as_str())
    }
}

/// Builds one profile per position over equal-length `members`.
pub fn position_profiles<T: Scalar, S: AsRef<str>>(members: &[&[S]]) -> Vec<PositionProfile<T>> {
    let Some(first) = members.first() else {
        return Vec::new();
    };
    let width = first.len();
    let lcs = longest_common_subsequence(members);
    let mut diverges = vec![false; width];
    for m in members {
        for p in divergent_positions(m, &lcs) {
            diverges[p] = true;
        }
    }
    (0..width)
        .map(|position| {
            let mut frequencies: BTreeMap<String, usize> = BTreeMap::new();
            for m in members {
                *frequencies.entry(m[position].as_ref().to_string()).or_insert(0) += 1;
            }
            let entropy = entropy_from_counts(frequencies.values().copied(), members.len());
            PositionProfile {
                position,
                frequencies,
                total: members.len(),
                entropy,
                diverges_from_lcs: diverges[position],
            }
        })
        .collect()
}

/// Variable iff the position diverged from the LCS and its entropy is
/// strictly above `theta`.
pub fn decide_variation_point<T: Scalar>(profile: &PositionProfile<T>, theta: T) -> bool {
    profile.diverges_from_lcs && profile.entropy > theta
}

/// Wildcard flags per position: the entropy decision, or a pre-masked
/// wildcard anywhere in the column.
pub fn variable_positions<T: Scalar>(profiles: &[PositionProfile<T>], theta: T) -> Vec<bool> {
    profiles
        .iter()
        .map(|p| p.has_wildcard() || decide_variation_point(p, theta))
        .collect()
}

/// What to emit at a position that is not variable (entropy ≤ θ) yet holds
/// more than one token across the cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LowEntropyPolicy {
    /// The differing tokens are constants of different events: split the
    /// cluster by them, one template per split. Within a split, the cluster's
    /// variable columns stay variable wherever they still hold several tokens.
    #[default]
    Split,
    /// One template with the most frequent token (ties: smallest). Members
    /// holding a minority token do not match their template.
    Majority,
    /// One template with a wildcard there.
    Wildcard,
}

impl fmt::Display for LowEntropyPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LowEntropyPolicy::Split => "split",
            LowEntropyPolicy::Majority => "majority",
            LowEntropyPolicy::Wildcard => "wildcard",
        })
    }
}

impl FromStr for LowEntropyPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "split" => Ok(LowEntropyPolicy::Split),
            "majority" => Ok(LowEntropyPolicy::Majority),
            "wildcard" => Ok(LowEntropyPolicy::Wildcard),
            other => Err(format!(
                "unknown low-entropy policy {other:?} (expected split, majority or wildcard)"
            )),
        }
    }
}

/// A template together with the cluster members it was built from.
#[derive(Debug, Clone)]
pub struct GeneratedTemplate<'a> {
    pub template: Template,
    pub members: Vec<&'a LogRecord>,
}

/// Emits the templates for one cluster.
///
/// Positions judged variable become wildcards; positions holding a single
/// token keep it. Positions that are not variable but still hold several
/// tokens follow `policy`. Under [`LowEntropyPolicy::Split`] each split gets
/// its own template; a split never introduces new variable columns, and a
/// column that became single-valued inside a split of two or more members is
/// a constant there.
/// The other policies yield exactly one template.
pub fn generate_templates<'a, T: Scalar>(
    cluster: &Cluster<'a>,
    theta: T,
    policy: LowEntropyPolicy,
) -> Vec<GeneratedTemplate<'a>> {
    let mut out = Vec::new();
    if !cluster.members.is_empty() {
        generate_into(&cluster.members, cluster.bucket_length, theta, policy, None, &mut out);
    }
    out
}

fn generate_into<'a, T: Scalar>(
    members: &[&'a LogRecord],
    length: usize,
    theta: T,
    policy: LowEntropyPolicy,
    inherited: Option<&[bool]>,
    out: &mut Vec<GeneratedTemplate<'a>>,
) {
    let seqs: Vec<&[String]> = members.iter().map(|r| r.tokens.as_slice()).collect();
    let profiles = position_profiles::<T, _>(&seqs);
    // Inside a split, a column that was variable for the whole cluster stays
    // variable unless the split shows it constant; smaller groups would
    // otherwise see lower entropies and fall apart into singletons. A single
    // record cannot show a column constant.
    let variable: Vec<bool> = match inherited {
        None => variable_positions(&profiles, theta),
        Some(parent) => profiles
            .iter()
            .map(|p| p.has_wildcard() || (parent[p.position] && (p.distinct() > 1 || members.len() == 1)))
            .collect(),
    };
    let conflicted: Vec<usize> = profiles
        .iter()
        .filter(|p| !variable[p.position] && p.distinct() > 1)
        .map(|p| p.position)
        .collect();

    if policy == LowEntropyPolicy::Split && !conflicted.is_empty() {
        let mut groups: IndexMap<Vec<&str>, Vec<&'a LogRecord>> = IndexMap::new();
        for &r in members {
            let key: Vec<&str> = conflicted.iter().map(|&p| r.tokens[p].as_str()).collect();
            groups.entry(key).or_default().push(r);
        }
        // every group is strictly smaller than `members`, so this terminates
        for group in groups.into_values() {
            generate_into(&group, length, theta, policy, Some(&variable), out);
        }
        return;
    }

    let tokens: Vec<String> = profiles
        .iter()
        .map(|p| {
            if variable[p.position] {
                WILDCARD.to_string()
            } else if p.distinct() == 1 {
                members[0].tokens[p.position].clone()
            } else {
                match policy {
                    LowEntropyPolicy::Majority => p.majority_token().unwrap_or(WILDCARD).to_string(),
                    _ => WILDCARD.to_string(),
                }
            }
        })
        .collect();
    debug_assert_eq!(tokens.len(), length);
    out.push(GeneratedTemplate {
        template: Template::new(tokens, members.len()),
        members: members.to_vec(),
    });
}

/// True when every sequence matched by `specific` is also matched by
/// `general`, and the two differ.
pub fn strictly_generalizes<S: AsRef<str>>(general: &[S], specific: &[S]) -> bool {
    general.len() == specific.len()
        && general
            .iter()
            .zip(specific)
            .all(|(g, s)| g.as_ref() == WILDCARD || g.as_ref() == s.as_ref())
        && general.iter().zip(specific).any(|(g, s)| g.as_ref() != s.as_ref())
}

/// Folds templates into strictly more general templates of the same bucket.
///
/// Several centers drawn from one event each attract the members that
/// happen to share a variable value with them, and such small clusters keep
/// that value as a constant. When another template of the bucket already
/// generalizes it, the small template's members are moved there. Among
/// several generalizations the most specific one wins (fewest wildcards, then
/// largest support, then earliest). Absorbers must keep at least one
/// constant token. Members still match their template afterwards, because a
/// generalization matches everything its specialization matches.
pub fn consolidate<M>(templates: Vec<(Template, Vec<M>)>) -> Vec<(Template, Vec<M>)> {
    let n = templates.len();
    let mut target: Vec<Option<usize>> = vec![None; n];
    for (i, (t, _)) in templates.iter().enumerate() {
        target[i] = templates
            .iter()
            .enumerate()
            .filter(|(j, (g, _))| {
                *j != i && g.constants().next().is_some() && strictly_generalizes(&g.tokens, &t.tokens)
            })
            .min_by(|(ja, (a, _)), (jb, (b, _))| {
                a.wildcard_count()
                    .cmp(&b.wildcard_count())
                    .then(b.support.cmp(&a.support))
                    .then(ja.cmp(jb))
            })
            .map(|(j, _)| j);
    }
    // strict generalization only ever adds wildcards, so chains are acyclic
    let root = |mut i: usize| {
        while let Some(j) = target[i] {
            i = j;
        }
        i
    };
    let roots: Vec<usize> = (0..n).map(root).collect();

    let mut slots: Vec<Option<(Template, Vec<M>)>> = templates.into_iter().map(Some).collect();
    for i in 0..n {
        if roots[i] != i {
            let (t, members) = slots[i].take().expect("each template moves once");
            let (dest, dest_members) = slots[roots[i]].as_mut().expect("roots are never moved");
            dest.support += t.support;
            dest_members.extend(members);
        }
    }
    slots.into_iter().flatten().collect()
}
