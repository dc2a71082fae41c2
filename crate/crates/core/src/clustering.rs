//! Nearest-center assignment inside a length bucket.

use crate::error::{Error, Result};
use crate::preprocessing::LogRecord;
use crate::sampling::Bucket;

#[derive(Debug, Clone)]
pub struct Cluster<'a> {
    pub center: &'a LogRecord,
    /// Members in bucket order; the center is one of them.
    pub members: Vec<&'a LogRecord>,
    pub bucket_length: usize,
}

/// Number of positions at which two equal-length sequences differ.
pub fn token_distance<S: AsRef<str>>(a: &[S], b: &[S]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!(
            "token distance between sequences of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x.as_ref() != y.as_ref()).count())
}

/// Assigns each record of the bucket to its nearest center, ties going to
/// the earliest center. Centers are not recomputed. Empty clusters are
/// dropped.
pub fn assign_clusters<'a>(bucket: &Bucket<'a>) -> Result<Vec<Cluster<'a>>> {
    if bucket.centers.is_empty() {
        return Err(Error::Domain(format!(
            "bucket of length {} has no centers",
            bucket.length
        )));
    }
    let mut members: Vec<Vec<&LogRecord>> = vec![Vec::new(); bucket.centers.len()];
    for &r in &bucket.records {
        let mut best = (usize::MAX, 0);
        for (i, c) in bucket.centers.iter().enumerate() {
            let d = token_distance(&r.tokens, &c.tokens)?;
            if d < best.0 {
                best = (d, i);
                if d == 0 {
                    break;
                }
            }
        }
        members[best.1].push(r);
    }
    Ok(bucket
        .centers
        .iter()
        .zip(members)
        .filter(|(_, m)| !m.is_empty())
        .map(|(&center, members)| Cluster {
            center,
            members,
            bucket_length: bucket.length,
        })
        .collect())
}
