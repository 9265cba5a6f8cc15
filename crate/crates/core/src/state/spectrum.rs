//! Eigenvalues of the density matrix of a Gaussian state.
//!
//! In Williamson normal modes the state is a product of thermal states, so its
//! eigenvalues are `p·e^{−Σ sⱼkⱼ}` over occupation vectors `k`, with
//! `p = Π(1 − e^{−sⱼ})` and `dⱼ = coth(sⱼ/2)`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use super::{GaussianState, ADMISSIBILITY_TOL};
use crate::error::{Error, Result};
use crate::symplectic;
use crate::tails::thermal_parameter;

const CLUSTER_TOL: f64 = 1e-10;

/// One eigenvalue of the density matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: f64,
    /// Occupation numbers of the block's Williamson normal modes, ordered by
    /// descending symplectic eigenvalue.
    pub occupation: Vec<u32>,
}

#[derive(Debug, PartialEq)]
struct Node {
    exponent: f64,
    occupation: Vec<u32>,
}

impl Eq for Node {}

impl Ord for Node {
    // max-heap: smallest exponent first, then lexicographically smallest occupation
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .exponent
            .total_cmp(&self.exponent)
            .then_with(|| other.occupation.cmp(&self.occupation))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GaussianState {
    /// The `top_k` largest density eigenvalues with their occupation vectors,
    /// descending. Ties with the last returned value are all included.
    ///
    /// Tail modes contribute only their ground-state factor to `p`; their
    /// excitations are not enumerated. Ties are detected by exact float
    /// equality, with symplectic eigenvalues equal to within a relative `1e-10`
    /// snapped together and identical `sⱼ` grouped so that equal sums compare equal.
    pub fn spectrum(&self, top_k: usize) -> Result<Vec<SpectrumEntry>> {
        if top_k == 0 {
            return Err(Error::InvalidInput("top_k must be positive".into()));
        }
        if !self.tail.classify().cond3_trace_class {
            return Err(Error::NoDensityMatrix(format!("tail {} is not trace class", self.tail)));
        }
        self.require_valid()?;

        let n = self.modes();
        let mut d = if n == 0 {
            Vec::new()
        } else {
            symplectic::symplectic_spectrum(&self.cov)?
        };
        // snap numerically equal eigenvalues to a common value
        let mut start = 0;
        while start < d.len() {
            let mut end = start + 1;
            while end < d.len() && (d[start] - d[end]).abs() <= CLUSTER_TOL * d[start] {
                end += 1;
            }
            let mean = d[start..end].iter().sum::<f64>() / (end - start) as f64;
            d[start..end].iter_mut().for_each(|x| *x = mean);
            start = end;
        }
        let mut log_p = self.tail.log_ground_weight()?;
        // groups of modes sharing the same thermal parameter
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for (j, &dj) in d.iter().enumerate() {
            if dj - 1.0 <= ADMISSIBILITY_TOL {
                continue;
            }
            log_p -= (0.5 * (dj - 1.0)).ln_1p();
            let s = thermal_parameter(dj);
            match groups.iter_mut().find(|(g, _)| g.to_bits() == s.to_bits()) {
                Some((_, members)) => members.push(j),
                None => groups.push((s, vec![j])),
            }
        }
        let active: Vec<usize> = groups.iter().flat_map(|(_, m)| m.iter().copied()).collect();
        let exponent = |k: &[u32]| -> f64 {
            groups
                .iter()
                .map(|(s, members)| s * members.iter().map(|&j| k[j] as f64).sum::<f64>())
                .sum()
        };

        let mut heap = BinaryHeap::new();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let start = vec![0u32; n];
        seen.insert(start.clone());
        heap.push(Node {
            exponent: 0.0,
            occupation: start,
        });

        let mut out: Vec<SpectrumEntry> = Vec::with_capacity(top_k);
        let mut last_exponent = f64::NAN;
        while let Some(node) = heap.pop() {
            if out.len() >= top_k && node.exponent != last_exponent {
                break;
            }
            for &j in &active {
                let mut child = node.occupation.clone();
                child[j] += 1;
                if seen.insert(child.clone()) {
                    heap.push(Node {
                        exponent: exponent(&child),
                        occupation: child,
                    });
                }
            }
            last_exponent = node.exponent;
            out.push(SpectrumEntry {
                value: (log_p - node.exponent).exp(),
                occupation: node.occupation,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tails::TailModel;

    #[test]
    fn single_mode_geometric_ladder() {
        let s = GaussianState::thermal(&[3.0]).unwrap();
        let spec = s.spectrum(8).unwrap();
        assert_eq!(spec.len(), 8);
        for (k, e) in spec.iter().enumerate() {
            assert!((e.value - 0.5f64.powi(k as i32 + 1)).abs() < 1e-15);
            assert_eq!(e.occupation, vec![k as u32]);
        }
    }

    #[test]
    fn vacuum_is_a_single_unit_eigenvalue() {
        let spec = GaussianState::vacuum(3).spectrum(5).unwrap();
        assert_eq!(spec.len(), 1);
        assert_eq!(spec[0].value, 1.0);
        assert_eq!(spec[0].occupation, vec![0, 0, 0]);
    }

    #[test]
    fn degenerate_two_mode_ties_are_lexicographic() {
        let spec = GaussianState::thermal(&[3.0, 3.0]).unwrap().spectrum(4).unwrap();
        let occ: Vec<Vec<u32>> = spec.iter().map(|e| e.occupation.clone()).collect();
        // top_k = 4 lands inside the total-occupation-2 level, which is completed
        assert_eq!(
            occ,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(spec[1].value, spec[2].value);
        assert_eq!(spec[3].value, spec[5].value);
        assert!((spec[0].value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn divergent_tail_has_no_density_matrix() {
        let s = GaussianState::vacuum(1).with_tail(TailModel::power(1.0, 1.0).unwrap());
        assert!(matches!(s.spectrum(3), Err(Error::NoDensityMatrix(_))));
        assert!(GaussianState::vacuum(1).spectrum(0).is_err());
    }

    #[test]
    fn tail_ground_weight_scales_p() {
        let tail = TailModel::geometric(1.0, 0.5).unwrap();
        let s = GaussianState::thermal(&[3.0]).unwrap().with_tail(tail);
        let spec = s.spectrum(1).unwrap();
        let tail_weight = tail.log_ground_weight().unwrap().exp();
        assert!((spec[0].value - 0.5 * tail_weight).abs() < 1e-15);
    }
}
