//! Root bookkeeping: deduplication, subfield labels, union cardinality via
//! inclusion–exclusion, and the fractional-exponent branch-count tables.

use crate::error::{SolverError, SolverResult};
use crate::{BranchIndex, ComplexValue};

/// One converged root with its full branch provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct RootRecord {
    pub value: ComplexValue,
    /// 1-based index of the inverted term.
    pub term_k: usize,
    /// Inverse-formula variant within the term.
    pub variant_q: u8,
    /// Primary branch index (log shift / Lambert branch).
    pub primary_branch: BranchIndex,
    /// Secondary branch index (root-of-unity selector).
    pub secondary_branch: BranchIndex,
    /// |f(value)| after the run.
    pub residual: f64,
    pub iterations: u32,
    pub polished: bool,
}

/// Branch provenance of a merged duplicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchAlias {
    pub term_k: usize,
    pub variant_q: u8,
    pub primary_branch: BranchIndex,
    pub secondary_branch: BranchIndex,
}

impl BranchAlias {
    fn of(record: &RootRecord) -> Self {
        BranchAlias {
            term_k: record.term_k,
            variant_q: record.variant_q,
            primary_branch: record.primary_branch,
            secondary_branch: record.secondary_branch,
        }
    }
}

/// A deduplicated root: the best representative plus everything that merged
/// into it.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogedRoot {
    pub root: RootRecord,
    pub aliases: Vec<BranchAlias>,
}

/// Deduplicated collection of roots.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub records: Vec<CatalogedRoot>,
    pub dedupe_tol: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Clusters records by value within `tol` (transitive closure) and keeps the
/// smallest-residual record per cluster, annotated with the merged aliases.
///
/// Output order follows the first appearance of each cluster in the input,
/// so equal inputs give identical outputs.
pub fn dedupe(records: &[RootRecord], tol: f64) -> RootSet {
    assert!(tol > 0.0, "dedupe tolerance must be positive");
    let n = records.len();
    // union-find over pairs within tol
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (records[i].value - records[j].value).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match clusters.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(i),
            None => clusters.push((root, vec![i])),
        }
    }
    let records_out = clusters
        .into_iter()
        .map(|(_, members)| {
            let best = members
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    records[a]
                        .residual
                        .partial_cmp(&records[b].residual)
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("cluster cannot be empty");
            let aliases = members
                .iter()
                .filter(|&&m| m != best)
                .map(|&m| BranchAlias::of(&records[m]))
                .collect();
            CatalogedRoot {
                root: records[best].clone(),
                aliases,
            }
        })
        .collect();
    RootSet {
        records: records_out,
        dedupe_tol: tol,
    }
}

/// Inclusion–exclusion union cardinality.
///
/// `intersections` holds |∩_{j∈J} A_j| for every non-empty J ⊆ {1..n},
/// indexed by the bitmask of J (entry 0 is ignored); its length must be 2^n.
pub fn union_count(n: usize, intersections: &[u64]) -> SolverResult<i64> {
    if n == 0 || n > 10 {
        return Err(SolverError::InvalidInput(format!(
            "union_count supports 1 ≤ n ≤ 10, got {n}"
        )));
    }
    if intersections.len() != 1 << n {
        return Err(SolverError::InvalidInput(format!(
            "intersection table must list all {} non-empty subsets (got {} entries)",
            (1u64 << n) - 1,
            intersections.len().saturating_sub(1)
        )));
    }
    let mut total: i64 = 0;
    for (mask, &size) in intersections.iter().enumerate().skip(1) {
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        total += sign * size as i64;
    }
    Ok(total)
}

/// Number of summands in the inclusion–exclusion expansion: 2^n − 1.
pub fn intersection_term_count(n: u32) -> SolverResult<u64> {
    if !(1..=62).contains(&n) {
        return Err(SolverError::InvalidInput(format!(
            "n must lie in 1..=62, got {n}"
        )));
    }
    Ok((1u64 << n) - 1)
}

/// The headline root-count rule for x^m − p·x^s + q = 0 with real exponents:
/// IntegerPart[max{m, s}], plus one when the constant term is negative.
///
/// This is the rule exactly as stated; for per-branch enumeration use
/// [`binomial_branch_table`], which is anchored to the worked case table and
/// disagrees with this rule on one of its own examples.
pub fn fractional_binomial_count(m: f64, s: f64, q_negative: bool) -> SolverResult<u64> {
    let a = m.max(s);
    if a.is_nan() || a <= 0.0 {
        return Err(SolverError::InvalidInput(format!(
            "max exponent must be positive, got {a}"
        )));
    }
    Ok(a.trunc() as u64 + u64::from(q_negative))
}

/// Branch indices for x^alpha = u with non-integer alpha > 0, per the four
/// worked cases (odd/even integer part × sign of u).
pub fn binomial_branch_table(alpha: f64, u_positive: bool) -> SolverResult<Vec<BranchIndex>> {
    if alpha.is_nan() || alpha <= 0.0 || !alpha.is_finite() {
        return Err(SolverError::InvalidInput(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    let a = alpha.trunc() as i64;
    if (alpha - alpha.trunc()).abs() < 1e-12 {
        return Err(SolverError::InvalidInput(format!(
            "alpha = {alpha} is an integer; use the 0..alpha-1 unity indices"
        )));
    }
    let mut table: Vec<BranchIndex> = vec![0];
    #[allow(clippy::ptr_arg)]
    let push_pairs = |table: &mut Vec<BranchIndex>, up_to: i64| {
        for k in 1..=up_to {
            table.push(k as BranchIndex);
            table.push(-(k as BranchIndex));
        }
    };
    if a % 2 == 1 {
        // odd integer part
        push_pairs(&mut table, (a - 1) / 2);
        if !u_positive {
            table.push((-(a + 1) / 2) as BranchIndex);
        }
    } else if u_positive {
        push_pairs(&mut table, a / 2);
    } else {
        push_pairs(&mut table, a / 2 - 1);
        table.push((-a / 2) as BranchIndex);
    }
    Ok(table)
}
