//! Witness families for non-hyperbolicity of Gordian-type graphs, with
//! machine-checkable certificates: geodesic triangles whose midpoints are
//! provably far from the opposite sides, quotient-graph models, and
//! compatibility checks for invariants against the move catalog.

use crate::bounds::{
    concordance_lower, hnt_lower, step_certificate, upper_from_path, BoundCertificate,
    DistanceBound, MoveKind,
};
use crate::knots::{FormalKnot, GeneratorKnot};
use crate::metricgraph::{MetricGraph, VertexPath};
use crate::{Error, Rational, Result};
use std::fmt;

/// The variant of the order-one generator used by the concordance witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum K11Variant {
    /// The positive trefoil T(2,3): tau = s' = 1. Every edge of the witness
    /// triangle is then certified geodesic.
    #[default]
    Trefoil,
    /// The mirror trefoil m(T(2,3)): tau = s' = -1. The third side's
    /// geodesic status is then honestly left uncertified.
    MirrorTrefoil,
}

impl K11Variant {
    fn generator(self) -> GeneratorKnot {
        let trefoil = GeneratorKnot::torus(2, 3).unwrap();
        match self {
            K11Variant::Trefoil => trefoil,
            K11Variant::MirrorTrefoil => trefoil.mirror(),
        }
    }
}

/// Which witness family a triangle belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// H(2)-Gordian graph.
    H2,
    /// H(n)-Gordian graph, n >= 3.
    Hn(i64),
    /// Concordance crossing-change graph.
    Concordance(K11Variant),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::H2 => write!(f, "H(2)"),
            Family::Hn(n) => write!(f, "H({n})"),
            Family::Concordance(K11Variant::Trefoil) => write!(f, "concordance"),
            Family::Concordance(K11Variant::MirrorTrefoil) => {
                write!(f, "concordance (mirror variant)")
            }
        }
    }
}

/// A geodesic-triangle witness: three catalog-certified paths of formal
/// knots closing up into a triangle, with a distinguished midpoint on the
/// third side. Fields are public so tests can corrupt a witness and watch
/// certification flag it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleWitness {
    pub family: Family,
    pub k: i64,
    /// sides[0]: U to K1; sides[1]: K1 to K2; sides[2]: K2 back to U.
    pub sides: [Vec<FormalKnot>; 3],
    /// Index of the midpoint within sides[2].
    pub midpoint_index: usize,
}

impl TriangleWitness {
    pub fn midpoint(&self) -> &FormalKnot {
        &self.sides[2][self.midpoint_index]
    }

    pub fn move_kind(&self) -> MoveKind {
        match self.family {
            Family::H2 => MoveKind::Hn(2),
            Family::Hn(n) => MoveKind::Hn(n),
            Family::Concordance(_) => MoveKind::ConcordanceCrossingChange,
        }
    }

    /// The witness as a metric graph: vertices are the knots of the three
    /// sides (labelled by their display form), edges the consecutive pairs.
    pub fn graph(&self) -> MetricGraph {
        let labels: Vec<Vec<String>> = self
            .sides
            .iter()
            .map(|side| side.iter().map(|k| k.to_string()).collect())
            .collect();
        let mut edges: Vec<(&str, &str)> = Vec::new();
        for side in &labels {
            for pair in side.windows(2) {
                edges.push((&pair[0], &pair[1]));
            }
        }
        MetricGraph::from_edges(&edges)
    }

    /// The three sides as vertex paths in `g` (normally `self.graph()`).
    pub fn vertex_paths(&self, g: &MetricGraph) -> Result<[VertexPath; 3]> {
        let mut paths = Vec::new();
        for side in &self.sides {
            let labels: Vec<String> = side.iter().map(|k| k.to_string()).collect();
            let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
            paths.push(VertexPath::new(g, &refs)?);
        }
        Ok(paths.try_into().expect("three sides"))
    }
}

fn copies(g: &GeneratorKnot, count: i64) -> FormalKnot {
    FormalKnot::unknot().with(g.clone(), count as u32)
}

/// Witness triangle in the H(2)-Gordian graph with corner knots built from
/// m = 2k connected summands of T(2,9) and T(2,15); sides have lengths
/// (2k, 2k, 4k) and the midpoint is k summands of each.
pub fn build_h2_witness(k: i64) -> Result<TriangleWitness> {
    build_h_family(Family::H2, 2, k)
}

/// The H(n)-Gordian analogue for n >= 3: every summand block is `n-1`
/// parallel copies, so each step is still a single H(n)-move.
pub fn build_hn_witness(n: i64, k: i64) -> Result<TriangleWitness> {
    if n < 3 {
        return Err(Error::WitnessParameter(format!("n = {n}, need n >= 3")));
    }
    build_h_family(Family::Hn(n), n, k)
}

fn build_h_family(family: Family, n: i64, k: i64) -> Result<TriangleWitness> {
    if k < 1 {
        return Err(Error::WitnessParameter(format!("k = {k}, need k >= 1")));
    }
    let t = n - 1;
    let m = 2 * k;
    let t9 = GeneratorKnot::torus(2, 9).unwrap();
    let t15 = GeneratorKnot::torus(2, 15).unwrap();

    let side1: Vec<FormalKnot> = (0..=m).map(|i| copies(&t9, i * t)).collect();
    let k1 = side1.last().unwrap().clone();
    let side2: Vec<FormalKnot> = (0..=m)
        .map(|j| k1.clone().with(t15.clone(), (j * t) as u32))
        .collect();
    // Alternating chain from U to K2: summand counts
    // (0,0), (0,1), (1,1), (1,2), ..., (m,m); stored from K2 back to U.
    let mut side3: Vec<FormalKnot> = (0..=2 * m)
        .map(|s| {
            let (a, b) = (s / 2, (s + 1) / 2);
            copies(&t9, a * t).with(t15.clone(), (b * t) as u32)
        })
        .collect();
    side3.reverse();
    let midpoint_index = (2 * m - m) as usize;

    Ok(TriangleWitness {
        family,
        k,
        sides: [side1, side2, side3],
        midpoint_index,
    })
}

/// Witness triangle in the concordance crossing-change graph: side lengths
/// (k, k, 2k) built from the slice-but-not-trivial double K01 and the
/// order-one generator K11, with midpoint k copies of K11.
pub fn build_concordance_witness(k: i64, variant: K11Variant) -> Result<TriangleWitness> {
    if k < 1 {
        return Err(Error::WitnessParameter(format!("k = {k}, need k >= 1")));
    }
    let k01 = GeneratorKnot::whitehead_double();
    let k11 = variant.generator();

    let side1: Vec<FormalKnot> = (0..=k).map(|i| copies(&k01, i)).collect();
    let k1 = side1.last().unwrap().clone();
    let side2: Vec<FormalKnot> = (0..=k)
        .map(|j| k1.clone().with(k11.clone(), j as u32))
        .collect();
    let mut side3: Vec<FormalKnot> = (0..=k)
        .map(|i| copies(&k11, i))
        .chain((1..=k).map(|j| copies(&k11, k).with(k01.clone(), j as u32)))
        .collect();
    side3.reverse();
    let midpoint_index = (2 * k - k) as usize;

    Ok(TriangleWitness {
        family: Family::Concordance(variant),
        k,
        sides: [side1, side2, side3],
        midpoint_index,
    })
}

/// Builds the family's witness at parameter k.
pub fn build_witness(family: Family, k: i64) -> Result<TriangleWitness> {
    match family {
        Family::H2 => build_h2_witness(k),
        Family::Hn(n) => build_hn_witness(n, k),
        Family::Concordance(v) => build_concordance_witness(k, v),
    }
}

/// Certificate for one triangle side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCertificate {
    pub length: i64,
    pub lower: Rational,
    pub rule: String,
    /// True iff the certified lower bound equals the path length, proving
    /// the side geodesic.
    pub geodesic: bool,
}

/// Machine-checkable certificate that the witness triangle is not
/// delta-thin for any delta below the separation bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCertificate {
    pub family: Family,
    pub k: i64,
    pub edges: [EdgeCertificate; 3],
    /// Lower bound on the distance from the midpoint to the union of the
    /// first two sides: the minimum over their vertices of a per-family
    /// pointwise lower bound.
    pub separation: Rational,
    pub verdict: String,
    /// For the concordance family: how the bounds lift to the Gordian
    /// (knot-level) crossing-change metric.
    pub gordian_lift: Option<String>,
    pub provenance: Vec<BoundCertificate>,
}

fn h_n_of(family: Family) -> Option<i64> {
    match family {
        Family::H2 => Some(2),
        Family::Hn(n) => Some(n),
        Family::Concordance(_) => None,
    }
}

/// Checks every step of the witness against the move catalog, certifies
/// each side's length against an invariant lower bound, and computes the
/// midpoint-separation bound. Non-geodesic sides are flagged in the
/// certificate, not treated as errors; uncatalogued steps are errors.
pub fn certify(w: &TriangleWitness) -> Result<TriangleCertificate> {
    for i in 0..3 {
        if w.sides[i].is_empty() || w.sides[i].last() != w.sides[(i + 1) % 3].first() {
            return Err(Error::OpenTriangle);
        }
    }
    let kind = w.move_kind();
    let mut provenance = Vec::new();

    let mut edges = Vec::new();
    for side in &w.sides {
        let length = upper_from_path(side, kind)?;
        let (a, b) = (side.first().unwrap(), side.last().unwrap());
        let (lower, rule) = match h_n_of(w.family) {
            Some(n) => (hnt_lower(a, b, n, 2)?, format!("hnt: m=2, n={n}")),
            None => (
                Rational::from_integer(concordance_lower(a, b)),
                "tau/s-prime".to_string(),
            ),
        };
        let geodesic = lower == Rational::from_integer(length);
        provenance.push(BoundCertificate::new(
            "edge",
            format!("{a} .. {b}: length {length}, lower {lower} via {rule}"),
        ));
        edges.push(EdgeCertificate {
            length,
            lower,
            rule,
            geodesic,
        });
    }
    let edges: [EdgeCertificate; 3] = edges.try_into().expect("three sides");

    let midpoint = w.midpoint();
    let mut separation: Option<Rational> = None;
    let mut feed = |v: Rational| {
        separation = Some(match separation {
            Some(s) => s.min(v),
            None => v,
        });
    };
    match h_n_of(w.family) {
        Some(n) => {
            for v in &w.sides[0] {
                let d = if n == 2 {
                    // F_5-rank difference of the double branched covers.
                    Rational::from_integer(
                        (midpoint.e_mod_p(2, 5)? as i64 - v.e_mod_p(2, 5)? as i64).abs(),
                    )
                } else {
                    hnt_lower(midpoint, v, n, 5)?
                };
                feed(d);
            }
            for v in &w.sides[1] {
                feed(hnt_lower(midpoint, v, n, 9)?);
            }
            provenance.push(BoundCertificate::new(
                "separation",
                if n == 2 {
                    "first side via e_2^5 differences, second side via hnt m=9, n=2".to_string()
                } else {
                    format!("first side via hnt m=5, second side via hnt m=9, n={n}")
                },
            ));
        }
        None => {
            for v in w.sides[0].iter().chain(&w.sides[1]) {
                feed(Rational::from_integer(concordance_lower(midpoint, v)));
            }
            provenance.push(BoundCertificate::new(
                "separation",
                "both sides via tau and s' differences".to_string(),
            ));
        }
    }
    let separation = separation.expect("nonempty sides");

    let gordian_lift = match w.family {
        Family::Concordance(_) => Some(
            "crossing-change distance between knots dominates the distance between their \
             concordance classes, so this separation bound also holds in the knot-level \
             Gordian graph"
                .to_string(),
        ),
        _ => None,
    };

    Ok(TriangleCertificate {
        family: w.family,
        k: w.k,
        verdict: format!("triangle is not delta-thin for any delta < {separation}"),
        edges,
        separation,
        gordian_lift,
        provenance,
    })
}

/// Least k whose certified midpoint separation exceeds `delta`.
pub fn schedule_k_for_delta(family: Family, delta: Rational) -> Result<i64> {
    if delta < Rational::from_integer(0) {
        return Err(Error::WitnessParameter(format!("delta = {delta}, need >= 0")));
    }
    for k in 1..=100_000 {
        let cert = certify(&build_witness(family, k)?)?;
        if cert.separation > delta {
            return Ok(k);
        }
    }
    Err(Error::WitnessParameter(format!(
        "no k <= 100000 exceeds delta = {delta}"
    )))
}

/// The concordance-graph translation `L -> L # reverse-mirror(K) # K2`,
/// which moves the class of K to the class of K2 and preserves every
/// tau/s' difference.
pub fn concordance_translate(l: &FormalKnot, k: &FormalKnot, k2: &FormalKnot) -> FormalKnot {
    l.connected_sum(&k.reverse_mirror()).connected_sum(k2)
}

/// The invariant indexing a single-invariant quotient model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientInvariant {
    /// Orientable 4-genus, crossing-change moves; classes 0..N.
    G4,
    /// Unknotting number, crossing-change moves; classes 0..N.
    U,
    /// Nonorientable 4-genus, H(2) band moves; classes 0..N.
    Gamma4,
    /// tau, crossing-change moves; classes -N..N.
    Tau,
    /// s', crossing-change moves; classes -N..N.
    SHalf,
}

impl QuotientInvariant {
    pub fn signed(self) -> bool {
        matches!(self, QuotientInvariant::Tau | QuotientInvariant::SHalf)
    }

    fn move_kind(self) -> MoveKind {
        match self {
            QuotientInvariant::Gamma4 => MoveKind::Hn(2),
            _ => MoveKind::ConcordanceCrossingChange,
        }
    }

    /// The class-n witness knot of the model's family.
    fn witness_knot(self, n: i64) -> FormalKnot {
        if n == 0 {
            return FormalKnot::unknot();
        }
        match self {
            QuotientInvariant::Gamma4 => {
                // gamma4(T(2n+2, 2n+1)) = n.
                FormalKnot::generator(GeneratorKnot::torus(2 * n + 2, 2 * n + 1).unwrap())
            }
            _ => {
                let g = GeneratorKnot::torus(2, 2 * n.abs() + 1).unwrap();
                let g = if n < 0 { g.mirror() } else { g };
                FormalKnot::generator(g)
            }
        }
    }

    fn evaluate(self, k: &FormalKnot) -> Result<i64> {
        let not_exact =
            |what: &str| Error::InvariantNotExact(what.to_string(), k.to_string());
        match self {
            QuotientInvariant::G4 => k.g4_interval().value().ok_or_else(|| not_exact("g4")),
            QuotientInvariant::U => k.u_interval().value().ok_or_else(|| not_exact("u")),
            QuotientInvariant::Gamma4 => {
                k.gamma4_interval().value().ok_or_else(|| not_exact("gamma4"))
            }
            QuotientInvariant::Tau => Ok(k.tau()),
            QuotientInvariant::SHalf => Ok(k.s_half()),
        }
    }
}

impl fmt::Display for QuotientInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            QuotientInvariant::G4 => "g4",
            QuotientInvariant::U => "u",
            QuotientInvariant::Gamma4 => "gamma4",
            QuotientInvariant::Tau => "tau",
            QuotientInvariant::SHalf => "s-prime",
        };
        write!(f, "{name}")
    }
}

/// A verified single-invariant quotient model: a path graph on invariant
/// classes plus, for each class, a witness knot realizing that value.
#[derive(Debug)]
pub struct QuotientModel {
    pub invariant: QuotientInvariant,
    pub graph: MetricGraph,
    pub witnesses: Vec<(i64, FormalKnot)>,
}

/// Builds the quotient model on classes {0..N} (or {-N..N} for the signed
/// invariants), verifying that each witness knot has invariant exactly n
/// and that consecutive witnesses are catalog-adjacent.
pub fn quotient_model(invariant: QuotientInvariant, n_max: i64) -> Result<QuotientModel> {
    if n_max < 1 {
        return Err(Error::WitnessParameter(format!("N = {n_max}, need N >= 1")));
    }
    let lo = if invariant.signed() { -n_max } else { 0 };
    let classes: Vec<i64> = (lo..=n_max).collect();

    let mut witnesses = Vec::new();
    for &n in &classes {
        let k = invariant.witness_knot(n);
        let value = invariant.evaluate(&k)?;
        if value != n {
            return Err(Error::WitnessVerification(format!(
                "{invariant}({k}) = {value}, expected {n}"
            )));
        }
        witnesses.push((n, k));
    }
    for pair in witnesses.windows(2) {
        if step_certificate(&pair[0].1, &pair[1].1, invariant.move_kind()).is_none() {
            return Err(Error::WitnessVerification(format!(
                "classes {} and {}: witnesses {} and {} are not catalog-adjacent",
                pair[0].0, pair[0].1, pair[1].0, pair[1].1
            )));
        }
    }

    let labels: Vec<String> = classes.iter().map(|n| n.to_string()).collect();
    let edges: Vec<(&str, &str)> = labels
        .windows(2)
        .map(|w| (w[0].as_str(), w[1].as_str()))
        .collect();
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    Ok(QuotientModel {
        invariant,
        graph: MetricGraph::from_parts(&label_refs, &edges),
        witnesses,
    })
}

/// The two-invariant (g4, u) quotient model: lattice points
/// {(m, n) : 0 <= m <= n <= N} with witness knots whose g4 is exactly m and
/// whose unknotting number is exactly n.
#[derive(Debug)]
pub struct TwoInvariantModel {
    pub size: i64,
    pub points: Vec<(i64, i64, FormalKnot)>,
}

impl TwoInvariantModel {
    /// Certified distance interval between two classes: lower bound the
    /// Chebyshev distance, upper bound the taxicab distance.
    pub fn pair_bound(&self, a: (i64, i64), b: (i64, i64)) -> Result<DistanceBound> {
        for p in [a, b] {
            if !(0 <= p.0 && p.0 <= p.1 && p.1 <= self.size) {
                return Err(Error::WitnessParameter(format!(
                    "({}, {}) outside the lattice",
                    p.0, p.1
                )));
            }
        }
        let (dm, dn) = ((a.0 - b.0).abs(), (a.1 - b.1).abs());
        let mut bound = DistanceBound::default();
        bound.improve_lower(
            Rational::from_integer(dm.max(dn)),
            BoundCertificate::new("l-infinity", "per-move change of (g4, u) is at most (1, 1)"),
        )?;
        bound.improve_upper(
            dm + dn,
            BoundCertificate::new("l1", "axis-aligned catalog path"),
        )?;
        Ok(bound)
    }
}

/// Builds and verifies the two-invariant model: each witness is a sum of
/// the slice stevedore knot (u = 1, g4 = 0) and trefoils (u = g4 = 1).
pub fn quotient_two_invariant_model(n_max: i64) -> Result<TwoInvariantModel> {
    if n_max < 1 {
        return Err(Error::WitnessParameter(format!("N = {n_max}, need N >= 1")));
    }
    let stevedore = GeneratorKnot::stevedore();
    let trefoil = GeneratorKnot::torus(2, 3).unwrap();
    let mut points = Vec::new();
    for n in 0..=n_max {
        for m in 0..=n {
            let k = FormalKnot::unknot()
                .with(stevedore.clone(), (n - m) as u32)
                .with(trefoil.clone(), m as u32);
            if k.g4_interval().value() != Some(m) {
                return Err(Error::WitnessVerification(format!("g4({k}) != {m}")));
            }
            if k.u_interval().value() != Some(n) {
                return Err(Error::WitnessVerification(format!("u({k}) != {n}")));
            }
            points.push((m, n, k));
        }
    }
    Ok(TwoInvariantModel {
        size: n_max,
        points,
    })
}

/// The quotient metric model whose invariant is NOT compatible with the
/// move set: vertices {0..N}, an edge from every n >= 1 to 0, and edges
/// between classes differing by exactly 4.
pub fn noncompatible_model(n_max: i64) -> Result<MetricGraph> {
    if n_max < 5 {
        return Err(Error::WitnessParameter(format!("N = {n_max}, need N >= 5")));
    }
    let labels: Vec<String> = (0..=n_max).map(|n| n.to_string()).collect();
    let mut edges: Vec<(&str, &str)> = Vec::new();
    for n in 1..=n_max as usize {
        edges.push((&labels[0], &labels[n]));
    }
    for n in 0..=(n_max as usize - 4) {
        edges.push((&labels[n], &labels[n + 4]));
    }
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    Ok(MetricGraph::from_parts(&label_refs, &edges))
}

/// Result of sampling an invariant against move-catalog entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    /// True iff the invariant changes by at most 1 across every sampled
    /// catalog-adjacent pair.
    pub compatible: bool,
    /// A sampled pair with |change| > 1, when incompatible.
    pub witness: Option<(FormalKnot, FormalKnot, i64)>,
}

/// Checks |change of invariant| <= 1 over the sampled catalog-adjacent
/// pairs. Errors if the invariant is not exactly computable on a sample.
pub fn check_compatibility(
    invariant: QuotientInvariant,
    sample: &[(FormalKnot, FormalKnot)],
) -> Result<CompatibilityReport> {
    for (a, b) in sample {
        let change = (invariant.evaluate(a)? - invariant.evaluate(b)?).abs();
        if change > 1 {
            return Ok(CompatibilityReport {
                compatible: false,
                witness: Some((a.clone(), b.clone(), change)),
            });
        }
    }
    Ok(CompatibilityReport {
        compatible: true,
        witness: None,
    })
}
