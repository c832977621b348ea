//! First homology of Brieskorn manifolds `Sigma(w1, w2, w3)` by Orlik's
//! algorithm. This is the homology engine behind cyclic branched covers of
//! torus knots: `Sigma_m(T(p,q)) = Sigma(p, q, m)`.

use crate::abelian::FiniteAbelianGroup;
use crate::{Error, Result};
use num::integer::{gcd, lcm};
use num::BigUint;
use std::fmt;

/// Weights of a Brieskorn manifold; every weight exceeds 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrieskornWeights {
    w: [u64; 3],
}

impl BrieskornWeights {
    pub fn new(w1: u64, w2: u64, w3: u64) -> Result<Self> {
        if w1 <= 1 || w2 <= 1 || w3 <= 1 {
            return Err(Error::InvalidWeights(w1, w2, w3));
        }
        Ok(BrieskornWeights { w: [w1, w2, w3] })
    }

    pub fn weights(&self) -> [u64; 3] {
        self.w
    }

    fn selected(&self, subset: IndexSubset) -> Vec<u64> {
        subset.iter().map(|i| self.w[i - 1]).collect()
    }

    fn complement_weights(&self, subset: IndexSubset) -> Vec<u64> {
        subset.complement().iter().map(|i| self.w[i - 1]).collect()
    }
}

impl fmt::Display for BrieskornWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sigma({}, {}, {})", self.w[0], self.w[1], self.w[2])
    }
}

/// A subset of the index set {1, 2, 3}, as a 3-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSubset(u8);

impl IndexSubset {
    pub const EMPTY: IndexSubset = IndexSubset(0);
    pub const FULL: IndexSubset = IndexSubset(0b111);

    /// Builds a subset from indices in {1, 2, 3}; out-of-range indices panic.
    pub fn from_indices(indices: &[usize]) -> Self {
        let mut mask = 0u8;
        for &i in indices {
            assert!((1..=3).contains(&i), "index {i} outside {{1,2,3}}");
            mask |= 1 << (i - 1);
        }
        IndexSubset(mask)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        (1..=3).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn complement(&self) -> IndexSubset {
        IndexSubset(!self.0 & 0b111)
    }

    pub fn is_subset_of(&self, other: IndexSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.0;
        (1..=3usize).filter(move |i| mask & (1 << (i - 1)) != 0)
    }

    /// All eight subsets of {1,2,3}, in mask order.
    pub fn all() -> impl Iterator<Item = IndexSubset> {
        (0u8..8).map(IndexSubset)
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(&self) -> Vec<IndexSubset> {
        let m = self.0;
        IndexSubset::all().filter(|s| s.0 & !m == 0).collect()
    }

    /// Proper subsets `J` with `J != self`.
    pub fn proper_subsets(&self) -> Vec<IndexSubset> {
        self.subsets().into_iter().filter(|s| s.0 != self.0).collect()
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// `prod(w_J) / lcm(w_J)`, with the empty-set value 1. The lcm of a set
/// divides its product, so this is always an integer.
fn prod_over_lcm(weights: &[u64]) -> i128 {
    if weights.is_empty() {
        return 1;
    }
    let prod: i128 = weights.iter().map(|&w| w as i128).product();
    let l: i128 = weights.iter().fold(1i128, |acc, &w| lcm(acc, w as i128));
    debug_assert_eq!(prod % l, 0);
    prod / l
}

/// Orlik's alternating sum `kappa(I)` over subsets `J` of `I`.
pub fn kappa(w: &BrieskornWeights, subset: IndexSubset) -> i64 {
    let mut total: i128 = 0;
    for j in subset.subsets() {
        let sign = if (subset.len() - j.len()) % 2 == 0 { 1 } else { -1 };
        total += sign * prod_over_lcm(&w.selected(j));
    }
    i64::try_from(total).expect("kappa overflow")
}

/// `kappa(I)` on even-cardinality subsets, zero on odd ones.
pub fn kappa_prime(w: &BrieskornWeights, subset: IndexSubset) -> i64 {
    if subset.len() % 2 == 0 {
        kappa(w, subset)
    } else {
        0
    }
}

/// The inductively defined torsion factors `c(I)`; `c({1,2,3})` is rejected
/// since its numerator would be a gcd over the empty weight set.
pub fn c_value(w: &BrieskornWeights, subset: IndexSubset) -> Result<u64> {
    c_value_memo(w, subset, &mut [None; 8])
}

fn c_value_memo(w: &BrieskornWeights, subset: IndexSubset, memo: &mut [Option<u64>; 8]) -> Result<u64> {
    if let Some(v) = memo[subset.0 as usize] {
        return Ok(v);
    }
    let v = if subset.is_empty() {
        1
    } else if subset == IndexSubset::FULL {
        return Err(Error::FullSubsetCValue);
    } else {
        let comp = w.complement_weights(subset);
        let num = comp.iter().fold(0u64, |acc, &x| gcd(acc, x));
        let mut den = 1u64;
        for j in subset.proper_subsets() {
            den *= c_value_memo(w, j, memo)?;
        }
        if num % den != 0 {
            return Err(Error::NonIntegralC(subset.to_string(), num, den));
        }
        num / den
    };
    memo[subset.0 as usize] = Some(v);
    Ok(v)
}

/// `H_1(Sigma(w1,w2,w3); Z)` as a canonical [`FiniteAbelianGroup`]:
/// free rank `kappa({1,2,3})`, torsion `Z_{d_1} (+) ... (+) Z_{d_r}` with
/// `d_j` the product of `c(I)` over subsets with `kappa'(I) >= j`.
pub fn homology(w: &BrieskornWeights) -> Result<FiniteAbelianGroup> {
    let rank = kappa(w, IndexSubset::FULL);
    debug_assert!(rank >= 0, "negative rank from Orlik's algorithm");

    let r = IndexSubset::all().map(|s| kappa(w, s)).max().unwrap_or(0);
    let max_kp = IndexSubset::all().map(|s| kappa_prime(w, s)).max().unwrap_or(0);
    if r > max_kp {
        // d_j for j beyond every kappa' value is an empty product; flag the
        // weight triple since the literature's examples never exercise this.
        log::warn!(
            "{w}: literal r = {r} exceeds max kappa' = {max_kp}; excess d_j are empty products"
        );
    }

    let mut group = FiniteAbelianGroup::free(rank.max(0) as usize);
    for j in 1..=r {
        let mut d_j = BigUint::from(1u32);
        for s in IndexSubset::all() {
            if kappa_prime(w, s) >= j {
                d_j *= BigUint::from(c_value(w, s)?);
            }
        }
        if d_j > BigUint::from(1u32) {
            group = group.direct_sum(&FiniteAbelianGroup::cyclic(&d_j));
        }
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FiniteAbelianGroup;

    fn w(a: u64, b: u64, c: u64) -> BrieskornWeights {
        BrieskornWeights::new(a, b, c).unwrap()
    }

    fn sub(indices: &[usize]) -> IndexSubset {
        IndexSubset::from_indices(indices)
    }

    #[test]
    fn weights_must_exceed_one() {
        assert!(BrieskornWeights::new(1, 9, 9).is_err());
        assert!(BrieskornWeights::new(2, 9, 9).is_ok());
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&w(2, 9, 9), sub(&[2, 3])), 8);
        assert_eq!(kappa(&w(2, 9, 9), IndexSubset::EMPTY), 1);
        assert_eq!(kappa(&w(2, 9, 9), IndexSubset::FULL), 0);
    }

    #[test]
    fn kappa_prime_examples() {
        assert_eq!(kappa_prime(&w(2, 15, 9), sub(&[2, 3])), 2);
        assert_eq!(kappa_prime(&w(2, 15, 5), sub(&[2, 3])), 4);
        assert_eq!(kappa_prime(&w(2, 15, 5), sub(&[1])), 0);
        assert_eq!(kappa_prime(&w(2, 9, 9), sub(&[3])), 0);
    }

    #[test]
    fn c_value_examples() {
        for k in [3u64, 5, 7, 9, 11, 13, 15] {
            assert_eq!(c_value(&w(2, k, k), sub(&[2, 3])).unwrap(), 2);
        }
        assert_eq!(c_value(&w(2, 9, 9), IndexSubset::EMPTY).unwrap(), 1);
        assert_eq!(c_value(&w(2, 9, 9), sub(&[1])).unwrap(), 9);
        assert!(matches!(
            c_value(&w(2, 9, 9), IndexSubset::FULL),
            Err(crate::Error::FullSubsetCValue)
        ));
    }

    #[test]
    fn homology_known_values() {
        assert_eq!(
            homology(&w(2, 15, 9)).unwrap(),
            FiniteAbelianGroup::cyclic_u64(2).multiple(2)
        );
        assert_eq!(
            homology(&w(2, 15, 5)).unwrap(),
            FiniteAbelianGroup::cyclic_u64(2).multiple(4)
        );
        assert!(homology(&w(2, 9, 5)).unwrap().is_trivial());
        assert_eq!(homology(&w(2, 9, 2)).unwrap(), FiniteAbelianGroup::cyclic_u64(9));
    }

    #[test]
    fn homology_2kk_family() {
        for k in [3usize, 5, 7, 9, 11, 13, 15] {
            assert_eq!(
                homology(&w(2, k as u64, k as u64)).unwrap(),
                FiniteAbelianGroup::cyclic_u64(2).multiple(k - 1),
                "Sigma(2,{k},{k})"
            );
        }
    }

    #[test]
    fn subset_helpers() {
        assert_eq!(IndexSubset::FULL.complement(), IndexSubset::EMPTY);
        assert_eq!(sub(&[1, 3]).len(), 2);
        assert!(sub(&[1]).is_subset_of(sub(&[1, 3])));
        assert_eq!(sub(&[2, 3]).proper_subsets().len(), 3);
        assert_eq!(IndexSubset::all().count(), 8);
    }
}
