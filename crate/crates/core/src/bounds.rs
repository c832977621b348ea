//! Certified lower and upper bounds on H(n)-Gordian and concordance
//! crossing-change distances, with a move catalog for path-certified upper
//! bounds and a propagation engine across the d_n family.

use crate::knots::{FormalKnot, GeneratorBase, GeneratorKnot};
use crate::{Error, Rational, Result};
use std::collections::BTreeMap;
use std::fmt;

/// One applied bound rule, for the provenance trail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub rule: String,
    pub detail: String,
}

impl BoundCertificate {
    pub fn new(rule: impl Into<String>, detail: impl Into<String>) -> Self {
        BoundCertificate {
            rule: rule.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for BoundCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

/// A certified bound on a distance: exact rational lower bound (with its
/// integer ceiling) and an optional integer upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceBound {
    lower_rational: Rational,
    lower_integer: i64,
    upper: Option<i64>,
    provenance: Vec<BoundCertificate>,
}

impl Default for DistanceBound {
    fn default() -> Self {
        DistanceBound {
            lower_rational: Rational::new(0, 1),
            lower_integer: 0,
            upper: None,
            provenance: Vec::new(),
        }
    }
}

impl DistanceBound {
    pub fn lower_rational(&self) -> Rational {
        self.lower_rational
    }

    pub fn lower_integer(&self) -> i64 {
        self.lower_integer
    }

    pub fn upper(&self) -> Option<i64> {
        self.upper
    }

    pub fn provenance(&self) -> &[BoundCertificate] {
        &self.provenance
    }

    /// Raises the lower bound if `lower` improves it.
    pub fn improve_lower(&mut self, lower: Rational, cert: BoundCertificate) -> Result<bool> {
        if lower <= self.lower_rational {
            return Ok(false);
        }
        let ceiled = lower.ceil().to_integer();
        if let Some(u) = self.upper {
            if ceiled > u {
                return Err(Error::ContradictoryBounds {
                    lower: lower.to_string(),
                    upper: u.to_string(),
                });
            }
        }
        self.lower_rational = lower;
        self.lower_integer = ceiled;
        self.provenance.push(cert);
        Ok(true)
    }

    /// Lowers the upper bound if `upper` improves it.
    pub fn improve_upper(&mut self, upper: i64, cert: BoundCertificate) -> Result<bool> {
        if self.upper.is_some_and(|u| u <= upper) {
            return Ok(false);
        }
        if self.lower_integer > upper {
            return Err(Error::ContradictoryBounds {
                lower: self.lower_rational.to_string(),
                upper: upper.to_string(),
            });
        }
        self.upper = Some(upper);
        self.provenance.push(cert);
        Ok(true)
    }
}

/// Hoste-Nakanishi-Taniyama cover bound:
/// `|e_m(K) - e_m(K')| / ((n-1)(m-1)) <= d_n(K, K')`.
pub fn hnt_lower(k1: &FormalKnot, k2: &FormalKnot, n: i64, m: i64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidMoveIndex(n));
    }
    let e1 = k1.e(m)? as i64;
    let e2 = k2.e(m)? as i64;
    Ok(Rational::new((e1 - e2).abs(), (n - 1) * (m - 1)))
}

/// Abe-Kanenobu obstruction: `max(|e_2^3 diff|, |e_2^5 diff|) <= d_2`.
pub fn ak_lower_d2(k1: &FormalKnot, k2: &FormalKnot) -> Result<i64> {
    let d3 = (k1.e_mod_p(2, 3)? as i64 - k2.e_mod_p(2, 3)? as i64).abs();
    let d5 = (k1.e_mod_p(2, 5)? as i64 - k2.e_mod_p(2, 5)? as i64).abs();
    Ok(d3.max(d5))
}

/// Concordance crossing-change lower bound `max(|dtau|, |ds'|)`.
pub fn concordance_lower(k1: &FormalKnot, k2: &FormalKnot) -> i64 {
    let dt = (k1.tau() - k2.tau()).abs();
    let ds = (k1.s_half() - k2.s_half()).abs();
    dt.max(ds)
}

/// Best lower bound on d_n over a set of cover degrees, plus the
/// Abe-Kanenobu mod-3/mod-5 obstruction when n = 2.
pub fn best_lower_d_n(
    k1: &FormalKnot,
    k2: &FormalKnot,
    n: i64,
    degrees: &[i64],
) -> Result<DistanceBound> {
    let mut bound = DistanceBound::default();
    for &m in degrees {
        let v = hnt_lower(k1, k2, n, m)?;
        bound.improve_lower(v, BoundCertificate::new("hnt", format!("m={m}, n={n}")))?;
    }
    if n == 2 {
        let v = ak_lower_d2(k1, k2)?;
        bound.improve_lower(
            Rational::from_integer(v),
            BoundCertificate::new("abe-kanenobu", "e_2^3 / e_2^5"),
        )?;
    }
    Ok(bound)
}

/// The default cover-degree search set (the degrees the bounds actually
/// use on the torus-knot families).
pub const DEFAULT_COVER_DEGREES: [i64; 4] = [2, 3, 5, 9];

/// Kinds of unknotting moves the catalog knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// The Hoste-Nakanishi-Taniyama H(n)-move, n >= 2.
    Hn(i64),
    CrossingChange,
    ConcordanceCrossingChange,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveKind::Hn(n) => write!(f, "H({n})"),
            MoveKind::CrossingChange => write!(f, "crossing-change"),
            MoveKind::ConcordanceCrossingChange => write!(f, "concordance-crossing-change"),
        }
    }
}

fn single_summand(k: &FormalKnot) -> Option<(&GeneratorKnot, u32)> {
    let mut it = k.summands();
    match (it.next(), it.next()) {
        (Some(pair), None) => Some(pair),
        _ => None,
    }
}

fn torus_params(g: &GeneratorKnot) -> Option<(u64, u64)> {
    match *g.base() {
        GeneratorBase::Torus { p, q } => Some((p, q)),
        _ => None,
    }
}

/// Matches an oriented step `(from, to)` against the one-sided catalog rules.
fn match_directed(from: &FormalKnot, to: &FormalKnot, kind: MoveKind) -> Option<BoundCertificate> {
    match kind {
        MoveKind::Hn(n) if n >= 2 => {
            // U <-> #^{n-1} T(2,q): a single H(n)-move (Hoste-Nakanishi-
            // Taniyama; see also the band picture for n = 2).
            if from.is_unknot() {
                if let Some((g, m)) = single_summand(to) {
                    if let Some((2, q)) = torus_params(g) {
                        if m as i64 == n - 1 {
                            return Some(BoundCertificate::new(
                                format!("H({n})-unknotting"),
                                format!("one H({n})-move unknots #^{}T(2,{q})", n - 1),
                            ));
                        }
                    }
                }
            }
            if n == 2 {
                if let Some(cert) = match_h2_pair(from, to) {
                    return Some(cert);
                }
            }
            None
        }
        MoveKind::CrossingChange | MoveKind::ConcordanceCrossingChange => {
            // U <-> G for any atlas generator with unknotting number one.
            if from.is_unknot() {
                if let Some((g, 1)) = single_summand(to) {
                    if g.u_upper() == 1 {
                        return Some(BoundCertificate::new(
                            "crossing-change",
                            format!("u({g}) = 1"),
                        ));
                    }
                }
            }
            // T(2,q) <-> T(2,q-2): one crossing change.
            if let (Some((g1, 1)), Some((g2, 1))) = (single_summand(from), single_summand(to)) {
                if g1.is_mirrored() == g2.is_mirrored() && g1.is_reversed() == g2.is_reversed() {
                    if let (Some((2, q1)), Some((2, q2))) = (torus_params(g1), torus_params(g2)) {
                        if q1.abs_diff(q2) == 2 {
                            return Some(BoundCertificate::new(
                                "crossing-change",
                                format!("T(2,{q1}) <-> T(2,{q2})"),
                            ));
                        }
                    }
                }
            }
            None
        }
        MoveKind::Hn(n) => {
            debug_assert!(n < 2);
            None
        }
    }
}

/// H(2)-specific rules on the cancelled pair.
fn match_h2_pair(from: &FormalKnot, to: &FormalKnot) -> Option<BoundCertificate> {
    // Band move T(2,q) <-> T(2,q-4) (Lidman-Moore-Vazquez, Figure 2).
    // At q = 5 the target T(2,1) is the unknot.
    if let (Some((g1, 1)), to_single) = (single_summand(from), single_summand(to)) {
        if let Some((2, q1)) = torus_params(g1) {
            match to_single {
                Some((g2, 1))
                    if g1.is_mirrored() == g2.is_mirrored()
                        && g1.is_reversed() == g2.is_reversed() =>
                {
                    if let Some((2, q2)) = torus_params(g2) {
                        if q1.abs_diff(q2) == 4 {
                            return Some(BoundCertificate::new(
                                "H(2)-band",
                                format!("band move T(2,{q1}) <-> T(2,{q2})"),
                            ));
                        }
                    }
                }
                None if q1 == 5 => {
                    return Some(BoundCertificate::new(
                        "H(2)-band",
                        "band move T(2,5) <-> T(2,1) = U".to_string(),
                    ));
                }
                _ => {}
            }
        }
        // Batson family: T(2n+2,2n+1) <-> T(2n,2n-1) by one band move.
        if let Some((p1, q1)) = torus_params(g1) {
            if q1 == p1 + 1 && p1 % 2 == 1 {
                match to_single {
                    Some((g2, 1))
                        if g1.is_mirrored() == g2.is_mirrored()
                            && g1.is_reversed() == g2.is_reversed() =>
                    {
                        if let Some((p2, q2)) = torus_params(g2) {
                            if p2 + 2 == p1 && q2 + 2 == q1 {
                                return Some(BoundCertificate::new(
                                    "H(2)-band",
                                    format!("band move T({q1},{p1}) <-> T({q2},{p2})"),
                                ));
                            }
                        }
                    }
                    None if p1 == 3 => {
                        return Some(BoundCertificate::new(
                            "H(2)-band",
                            "band move T(4,3) <-> U".to_string(),
                        ));
                    }
                    _ => {}
                }
            }
        }
    }
    None
}

/// Certifies a single move step between two formal knots, after cancelling
/// a common connected-sum factor. Returns the matching catalog citation.
pub fn step_certificate(a: &FormalKnot, b: &FormalKnot, kind: MoveKind) -> Option<BoundCertificate> {
    let (s, t) = a.cancel_common(b);
    match_directed(&s, &t, kind).or_else(|| match_directed(&t, &s, kind))
}

/// Certifies every consecutive pair of `path` against the move catalog and
/// returns the path length as an upper bound on the distance between its
/// endpoints.
pub fn upper_from_path(path: &[FormalKnot], kind: MoveKind) -> Result<i64> {
    for (i, pair) in path.windows(2).enumerate() {
        if step_certificate(&pair[0], &pair[1], kind).is_none() {
            return Err(Error::UncertifiedStep {
                index: i,
                from: pair[0].to_string(),
                to: pair[1].to_string(),
            });
        }
    }
    Ok(path.len().saturating_sub(1) as i64)
}

/// A per-n table of bounds on d_n for one knot pair.
pub type BoundTable = BTreeMap<i64, DistanceBound>;

/// Closes a bound table under the three propagation rules:
/// monotonicity of d_n in n, the d_2-to-d_n lift
/// `(n-1) d_n >= (2/3) d_2 + 1`, and the collapse `d_{(n-1)u} <= 1` from an
/// upper bound `u` on d_n. The collapse is applied only toward indices above
/// the source, which is the direction the underlying move-gathering argument
/// supports for upper bounds.
pub fn propagate(table: &BoundTable) -> Result<BoundTable> {
    let mut out = table.clone();
    loop {
        let mut changed = false;

        // Collapse rule first: it can introduce new indices.
        let uppers: Vec<(i64, i64)> = out
            .iter()
            .filter_map(|(&n, b)| b.upper().map(|u| (n, u)))
            .collect();
        for (n, u) in uppers {
            let target = (n - 1) * u;
            if target > n {
                let entry = out.entry(target).or_default();
                changed |= entry.improve_upper(
                    1,
                    BoundCertificate::new("hnt-collapse", format!("from d_{n} <= {u}")),
                )?;
            }
        }

        let indices: Vec<i64> = out.keys().copied().collect();

        // Monotonicity: d_n >= d_{n'} for n <= n'.
        for w in indices.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let hi_lower = out[&hi].lower_rational();
            let lo_upper = out[&lo].upper();
            let lo_entry = out.get_mut(&lo).unwrap();
            changed |= lo_entry.improve_lower(
                hi_lower,
                BoundCertificate::new("monotone", format!("lower of d_{hi} flows to d_{lo}")),
            )?;
            if let Some(u) = lo_upper {
                let hi_entry = out.get_mut(&hi).unwrap();
                changed |= hi_entry.improve_upper(
                    u,
                    BoundCertificate::new("monotone", format!("upper of d_{lo} flows to d_{hi}")),
                )?;
            }
        }

        // Feedback between the lift and monotonicity: a lift at the
        // smallest index n0 >= 3 flows back down to d_2 and re-lifts,
        // converging to d_2 >= 3/(3 n0 - 5). Apply that stable point
        // directly so the exact iteration terminates.
        if out.contains_key(&2) {
            if let Some(&n0) = out.keys().find(|&&n| n >= 3) {
                let fixpoint = Rational::new(3, 3 * n0 - 5);
                changed |= out.get_mut(&2).unwrap().improve_lower(
                    fixpoint,
                    BoundCertificate::new(
                        "hnt-lift-fixpoint",
                        format!("d_2 >= d_{n0} and ({n0}-1) d_{n0} >= 2/3 d_2 + 1"),
                    ),
                )?;
            }
        }

        // d_2 lift: d_n >= ((2/3) d_2 + 1) / (n - 1) for n >= 3.
        if let Some(l2) = out.get(&2).map(|b| b.lower_rational()) {
            for &n in indices.iter().filter(|&&n| n >= 3) {
                let lifted = (Rational::new(2, 3) * l2 + Rational::from_integer(1))
                    / Rational::from_integer(n - 1);
                let entry = out.get_mut(&n).unwrap();
                changed |= entry.improve_lower(
                    lifted,
                    BoundCertificate::new("hnt-lift", format!("(2/3 d_2 + 1)/{}", n - 1)),
                )?;
            }
        }

        if !changed {
            return Ok(out);
        }
    }
}

/// Certified quasi-isometry constants between the H(n)- and H(2)-Gordian
/// graphs, for n >= 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiConstants {
    pub a: Rational,
    pub b: Rational,
    pub derivation: String,
}

/// Constants `(a, b)` with `d_2/a - b <= d_n <= d_2` for all knot pairs.
pub fn quasi_isometry_constants(n: i64) -> Result<QiConstants> {
    if n < 3 {
        return Err(Error::QiConstantsRange(n));
    }
    let a = Rational::new(3 * (n - 1), 2);
    let b = Rational::new(0, 1);
    Ok(QiConstants {
        a,
        b,
        derivation: format!(
            "(n-1) d_n >= (2/3) d_2 + 1 at n = {n} gives d_n >= d_2/a + 1/{} > d_2/a \
             with a = 3(n-1)/2 = {a}, so b = 0; d_n <= d_2 by monotonicity",
            n - 1
        ),
    })
}
