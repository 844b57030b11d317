//! The discovery step: pairwise comparison of divergence records populates
//! the interestingness vectors v1 (influence), v2 (navigability), and v3
//! (propagativeness) plus the repartition list, then top-k selection and
//! the diversity flag pick the interesting candidates.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::candidate::CandidateSubgraph;
use crate::compare::DivergenceRecord;
use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::scalar::Real;

/// Discovery outcome: pairwise-win tallies per vector, top-k rankings, the
/// repartition list, and the final interesting set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub v1: BTreeMap<String, u32>,
    pub v2: BTreeMap<String, u32>,
    pub v3: BTreeMap<String, u32>,
    /// Candidates recommended for repartitioning (dense subgroup structure).
    pub l: BTreeSet<String>,
    pub top_k: TopK,
    /// Candidates in the top-k of all three vectors whose diversity flag is
    /// set.
    pub interesting: BTreeSet<String>,
    /// True when the candidate's diversity ratio is at most the threshold.
    pub diversity_flags: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TopK {
    pub v1: Vec<String>,
    pub v2: Vec<String>,
    pub v3: Vec<String>,
}

/// Rank candidates with positive scores: score descending, then total
/// divergence descending, then id ascending.
fn rank_top_k<T: Real>(
    scores: &BTreeMap<String, u32>,
    totals: &BTreeMap<String, T>,
    k: usize,
) -> Vec<String> {
    let mut ranked: Vec<(&String, u32)> = scores
        .iter()
        .filter(|(_, &s)| s > 0)
        .map(|(id, &s)| (id, s))
        .collect();
    ranked.sort_by(|(id_a, s_a), (id_b, s_b)| {
        s_b.cmp(s_a)
            .then_with(|| {
                totals[*id_b]
                    .partial_cmp(&totals[*id_a])
                    .expect("finite divergence totals")
            })
            .then_with(|| id_a.cmp(id_b))
    });
    ranked.into_iter().take(k).map(|(id, _)| id.clone()).collect()
}

/// Run the pairwise discovery over divergence records.
///
/// For every ordered pair of distinct records, the second record earns a v1
/// point when its eigenvector divergence is strictly larger; nested inside
/// that, a v2 point when its edge-betweenness divergence is also larger; a
/// v3 point when its node-betweenness-plus-neighbor-degree sum is also
/// larger; and repartition membership when its subgraph-centrality-plus-core
/// sum also dominates.
pub fn discover<T: Real>(
    records: &[DivergenceRecord<T>],
    k: usize,
    diversity_threshold: T,
) -> Result<Verdict> {
    if records.len() < 2 {
        return Err(Error::TooFewRecords);
    }
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let mut v1: BTreeMap<String, u32> = BTreeMap::new();
    let mut totals: BTreeMap<String, T> = BTreeMap::new();
    for r in records {
        if totals.insert(r.candidate_id.clone(), r.total_divergence()).is_some() {
            return Err(Error::Invalid(format!(
                "duplicate candidate id {}",
                r.candidate_id
            )));
        }
        v1.insert(r.candidate_id.clone(), 0);
    }
    let mut v2 = v1.clone();
    let mut v3 = v1.clone();
    let mut l = BTreeSet::new();

    for first in records {
        for second in records {
            if first.candidate_id == second.candidate_id {
                continue;
            }
            if second.mean_of(MetricKind::Ev) <= first.mean_of(MetricKind::Ev) {
                continue;
            }
            *v1.get_mut(&second.candidate_id).expect("initialized") += 1;
            if second.mean_of(MetricKind::Ec) <= first.mean_of(MetricKind::Ec) {
                continue;
            }
            *v2.get_mut(&second.candidate_id).expect("initialized") += 1;
            let prop2 = second.mean_of(MetricKind::Nc) + second.mean_of(MetricKind::Z);
            let prop1 = first.mean_of(MetricKind::Nc) + first.mean_of(MetricKind::Z);
            if prop2 <= prop1 {
                continue;
            }
            *v3.get_mut(&second.candidate_id).expect("initialized") += 1;
            let sub2 = second.mean_of(MetricKind::Sc) + second.mean_of(MetricKind::Mu);
            let sub1 = first.mean_of(MetricKind::Sc) + first.mean_of(MetricKind::Mu);
            if sub2 > sub1 {
                l.insert(second.candidate_id.clone());
            }
        }
    }

    let top_k = TopK {
        v1: rank_top_k(&v1, &totals, k),
        v2: rank_top_k(&v2, &totals, k),
        v3: rank_top_k(&v3, &totals, k),
    };
    let diversity_flags: BTreeMap<String, bool> = records
        .iter()
        .map(|r| {
            (
                r.candidate_id.clone(),
                r.diversity_ratio <= diversity_threshold,
            )
        })
        .collect();
    let interesting = top_k
        .v1
        .iter()
        .filter(|id| top_k.v2.contains(id) && top_k.v3.contains(id))
        .filter(|id| diversity_flags[*id])
        .cloned()
        .collect();

    Ok(Verdict {
        v1,
        v2,
        v3,
        l,
        top_k,
        interesting,
        diversity_flags,
    })
}

/// Keyword subsets recommended for repartitioning an uninterpretable
/// candidate: singletons of the original keywords ordered by how often each
/// keyword occurs in the candidate's corpus. When no keyword occurs at all,
/// the original list is returned unchanged as one subset.
pub fn recommend_repartition(
    c: &CandidateSubgraph,
    original_keywords: &[String],
) -> Vec<Vec<String>> {
    let frequencies: Vec<(usize, &String)> = original_keywords
        .iter()
        .map(|k| (crate::candidate::keyword_frequency(&c.corpus, k), k))
        .collect();
    if original_keywords.is_empty() || frequencies.iter().all(|(f, _)| *f == 0) {
        return vec![original_keywords.to_vec()];
    }
    let mut ordered = frequencies;
    // stable sort: equal frequencies keep the original keyword order
    ordered.sort_by_key(|&(f, _)| std::cmp::Reverse(f));
    ordered
        .into_iter()
        .map(|(_, k)| vec![k.clone()])
        .collect()
}
