//! Finitely generated abelian groups in prime-power canonical form.
//!
//! A group is a free part `Z^r` together with a multiset of cyclic torsion
//! summands. Torsion is always stored as prime powers (`Z_15` becomes
//! `{3, 5}`), which makes minimal-generator counts and mod-p dimensions
//! single-pass counts over the summand list.

use num::{BigUint, Integer, One, Zero};
use std::fmt;

/// A finitely generated abelian group `Z^r (+) Z_{q_1} (+) ... (+) Z_{q_k}`
/// with every `q_i` a prime power.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    free_rank: usize,
    /// Sorted multiset of (prime, exponent) pairs.
    torsion: Vec<(BigUint, u32)>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FiniteAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Cyclic group of the given order; order 1 gives the trivial group.
    pub fn cyclic(order: &BigUint) -> Self {
        let mut g = FiniteAbelianGroup::trivial();
        g.add_cyclic(order);
        g.normalize();
        g
    }

    pub fn cyclic_u64(order: u64) -> Self {
        Self::cyclic(&BigUint::from(order))
    }

    /// `Z^rank (+) Z_{orders[0]} (+) ...`, orders split into prime powers.
    pub fn from_parts(rank: usize, orders: &[u64]) -> Self {
        let mut g = FiniteAbelianGroup::free(rank);
        for &o in orders {
            g.add_cyclic(&BigUint::from(o));
        }
        g.normalize();
        g
    }

    fn add_cyclic(&mut self, order: &BigUint) {
        assert!(!order.is_zero(), "cyclic summand of order zero");
        for (p, e) in factorize(order) {
            self.torsion.push((p, e));
        }
    }

    fn normalize(&mut self) {
        self.torsion
            .sort_by(|a, b| prime_power(a).cmp(&prime_power(b)).then(a.cmp(b)));
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Torsion summand orders `p^e`, sorted ascending.
    pub fn torsion_orders(&self) -> Vec<BigUint> {
        self.torsion.iter().map(prime_power).collect()
    }

    /// Direct sum: free ranks add and torsion multisets union.
    pub fn direct_sum(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        let mut g = FiniteAbelianGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion: self.torsion.clone(),
        };
        g.torsion.extend(other.torsion.iter().cloned());
        g.normalize();
        g
    }

    /// Sum of `n` copies of `self`.
    pub fn multiple(&self, n: usize) -> FiniteAbelianGroup {
        let mut g = FiniteAbelianGroup::trivial();
        for _ in 0..n {
            g = g.direct_sum(self);
        }
        g
    }

    /// Minimal size of a generating set: the free rank plus the largest
    /// number of torsion summands sharing a single prime base.
    pub fn min_generators(&self) -> usize {
        let mut per_prime: std::collections::BTreeMap<&BigUint, usize> =
            std::collections::BTreeMap::new();
        for (p, _) in &self.torsion {
            *per_prime.entry(p).or_insert(0) += 1;
        }
        self.free_rank + per_prime.values().copied().max().unwrap_or(0)
    }

    /// Dimension of `G (x) F_p` over the field with `p` elements.
    pub fn mod_p_dimension(&self, p: u64) -> crate::Result<usize> {
        if !is_prime(p) {
            return Err(crate::Error::NotPrime(p));
        }
        let p = BigUint::from(p);
        let count = self.torsion.iter().filter(|(q, _)| *q == p).count();
        Ok(self.free_rank + count)
    }
}

fn prime_power((p, e): &(BigUint, u32)) -> BigUint {
    p.pow(*e)
}

impl fmt::Display for FiniteAbelianGroup {
    /// Renders e.g. `0`, `Z_9`, `(Z_2)^8`, `Z^2 + (Z_2)^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let orders = self.torsion_orders();
        let mut i = 0;
        while i < orders.len() {
            let q = &orders[i];
            let mut count = 0;
            while i < orders.len() && &orders[i] == q {
                count += 1;
                i += 1;
            }
            if count == 1 {
                parts.push(format!("Z_{q}"));
            } else {
                parts.push(format!("(Z_{q})^{count}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Prime factorization by trial division. Orders arising here are products
/// of Brieskorn weights, so they are small; no need for anything cleverer.
fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let one: BigUint = BigUint::one();
    let mut d = BigUint::from(2u32);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let mut e = 0u32;
            while n.is_multiple_of(&d) {
                n /= &d;
                e += 1;
            }
            out.push((d.clone(), e));
        }
        d += &one;
    }
    if n > one {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
