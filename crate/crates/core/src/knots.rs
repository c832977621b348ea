//! Formal knots: connected sums over a small generator atlas (torus knots
//! and a few named knots), with exact concordance invariants and cyclic
//! branched-cover homology.

use crate::abelian::FiniteAbelianGroup;
use crate::brieskorn::{self, BrieskornWeights};
use crate::{Error, Result};
use num::integer::gcd;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

/// Named atlas knots beyond torus knots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedKnot {
    /// The stevedore knot 6_1.
    Stevedore,
    /// The 2-twisted positive Whitehead double of the right-handed trefoil.
    WhiteheadDouble,
    /// A knot loaded from an atlas extension file.
    Custom(String),
}

impl NamedKnot {
    fn surface_name(&self) -> &str {
        match self {
            NamedKnot::Stevedore => "6_1",
            NamedKnot::WhiteheadDouble => "Wh",
            NamedKnot::Custom(name) => name,
        }
    }
}

/// Atlas facts for one named knot. Values are the standard published ones;
/// `tau` and `s_half` refer to the knot itself (not its mirror).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasEntry {
    pub tau: i64,
    pub s_half: i64,
    pub u_upper: i64,
    pub g4_upper: i64,
    pub gamma4_upper: i64,
    /// Supported cyclic branched covers: degree -> H_1.
    pub covers: BTreeMap<i64, FiniteAbelianGroup>,
}

fn stevedore_entry() -> AtlasEntry {
    AtlasEntry {
        // tau(6_1) = 0, s(6_1) = 0 (6_1 is slice).
        tau: 0,
        s_half: 0,
        u_upper: 1,
        g4_upper: 0,
        gamma4_upper: 1,
        // Sigma_2(6_1) = L(9,7).
        covers: BTreeMap::from([(2, FiniteAbelianGroup::cyclic_u64(9))]),
    }
}

fn whitehead_entry() -> AtlasEntry {
    AtlasEntry {
        // Hedden-Ording: tau(D_+(T(2,3),2)) = 0, s'(D_+(T(2,3),2)) = 1.
        tau: 0,
        s_half: 1,
        u_upper: 1,
        g4_upper: 1,
        gamma4_upper: 3,
        covers: BTreeMap::new(),
    }
}

static EXTENSIONS: OnceLock<BTreeMap<String, AtlasEntry>> = OnceLock::new();

fn extensions() -> &'static BTreeMap<String, AtlasEntry> {
    static EMPTY: OnceLock<BTreeMap<String, AtlasEntry>> = OnceLock::new();
    EXTENSIONS.get().unwrap_or_else(|| EMPTY.get_or_init(BTreeMap::new))
}

/// Installs atlas extension entries, once per process.
pub fn load_extensions(entries: BTreeMap<String, AtlasEntry>) -> Result<()> {
    EXTENSIONS.set(entries).map_err(|_| Error::AtlasAlreadyLoaded)
}

/// Parses the line-oriented atlas extension format:
/// `name tau s_half u_upper g4_upper [cover:m=<degree>:<group> ...]`
/// where `<group>` is `0`, or `+`-joined factors `Z<order>`, `Z<order>^k`,
/// `Z^k`. Lines starting with `#` are comments.
pub fn parse_extension_file(text: &str) -> Result<BTreeMap<String, AtlasEntry>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::AtlasParse {
            line: lineno + 1,
            message,
        };
        let mut fields = line.split_whitespace();
        let name = fields.next().ok_or_else(|| err("missing name".into()))?.to_string();
        let mut next_int = |what: &str| -> Result<i64> {
            fields
                .next()
                .ok_or_else(|| err(format!("missing {what}")))?
                .parse::<i64>()
                .map_err(|e| err(format!("bad {what}: {e}")))
        };
        let tau = next_int("tau")?;
        let s_half = next_int("s_half")?;
        let u_upper = next_int("u_upper")?;
        let g4_upper = next_int("g4_upper")?;
        let mut covers = BTreeMap::new();
        for field in fields {
            let rest = field
                .strip_prefix("cover:m=")
                .ok_or_else(|| err(format!("unrecognized field {field:?}")))?;
            let (deg, group) = rest
                .split_once(':')
                .ok_or_else(|| err(format!("bad cover field {field:?}")))?;
            let degree: i64 = deg.parse().map_err(|e| err(format!("bad cover degree: {e}")))?;
            covers.insert(degree, parse_group(group).map_err(|m| err(m))?);
        }
        out.insert(
            name,
            AtlasEntry {
                tau,
                s_half,
                u_upper,
                g4_upper,
                gamma4_upper: 2 * g4_upper + 1,
                covers,
            },
        );
    }
    Ok(out)
}

fn parse_group(text: &str) -> std::result::Result<FiniteAbelianGroup, String> {
    if text == "0" {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let mut group = FiniteAbelianGroup::trivial();
    for factor in text.split('+') {
        let (body, count) = match factor.split_once('^') {
            Some((b, c)) => (b, c.parse::<usize>().map_err(|e| format!("bad exponent: {e}"))?),
            None => (factor, 1),
        };
        let part = if body == "Z" {
            FiniteAbelianGroup::free(1)
        } else {
            let order: u64 = body
                .strip_prefix('Z')
                .ok_or_else(|| format!("bad group factor {factor:?}"))?
                .parse()
                .map_err(|e| format!("bad group order: {e}"))?;
            if order < 2 {
                return Err(format!("cyclic order {order} below 2"));
            }
            FiniteAbelianGroup::cyclic_u64(order)
        };
        group = group.direct_sum(&part.multiple(count));
    }
    Ok(group)
}

/// One atlas generator with mirror / reverse decorations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorKnot {
    base: GeneratorBase,
    mirrored: bool,
    reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorBase {
    /// `T(p, q)` with `2 <= p < q` coprime (normalized).
    Torus { p: u64, q: u64 },
    Named(NamedKnot),
}

impl GeneratorKnot {
    /// Torus knot `T(p, q)`. Negative parameters mirror: `T(-3,2) = m(T(2,3))`.
    /// The parameter order is normalized so `T(9,2) = T(2,9)`.
    pub fn torus(p: i64, q: i64) -> Result<Self> {
        let mirrored = (p < 0) ^ (q < 0);
        let (a, b) = (p.unsigned_abs(), q.unsigned_abs());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if lo < 2 || gcd(a, b) != 1 {
            return Err(Error::InvalidTorusKnot(p, q));
        }
        Ok(GeneratorKnot {
            base: GeneratorBase::Torus { p: lo, q: hi },
            mirrored,
            reversed: false,
        })
    }

    pub fn named(name: NamedKnot) -> Result<Self> {
        if let NamedKnot::Custom(n) = &name {
            if extensions().get(n).is_none() {
                return Err(Error::UnknownNamedKnot(n.clone()));
            }
        }
        Ok(GeneratorKnot {
            base: GeneratorBase::Named(name),
            mirrored: false,
            reversed: false,
        })
    }

    pub fn stevedore() -> Self {
        GeneratorKnot::named(NamedKnot::Stevedore).unwrap()
    }

    pub fn whitehead_double() -> Self {
        GeneratorKnot::named(NamedKnot::WhiteheadDouble).unwrap()
    }

    pub fn base(&self) -> &GeneratorBase {
        &self.base
    }

    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn mirror(&self) -> Self {
        let mut g = self.clone();
        g.mirrored = !g.mirrored;
        g
    }

    pub fn reverse(&self) -> Self {
        let mut g = self.clone();
        g.reversed = !g.reversed;
        g
    }

    fn sign(&self) -> i64 {
        if self.mirrored {
            -1
        } else {
            1
        }
    }

    fn named_entry(&self) -> Option<AtlasEntry> {
        match &self.base {
            GeneratorBase::Named(NamedKnot::Stevedore) => Some(stevedore_entry()),
            GeneratorBase::Named(NamedKnot::WhiteheadDouble) => Some(whitehead_entry()),
            GeneratorBase::Named(NamedKnot::Custom(n)) => extensions().get(n).cloned(),
            GeneratorBase::Torus { .. } => None,
        }
    }

    fn torus_genus(&self) -> Option<i64> {
        match self.base {
            GeneratorBase::Torus { p, q } => Some(((p - 1) * (q - 1) / 2) as i64),
            _ => None,
        }
    }

    /// Ozsvath-Szabo tau. Mirror negates, reverse is inert.
    pub fn tau(&self) -> i64 {
        match (&self.base, self.named_entry()) {
            (GeneratorBase::Torus { .. }, _) => self.sign() * self.torus_genus().unwrap(),
            (_, Some(e)) => self.sign() * e.tau,
            _ => unreachable!("named generator without atlas entry"),
        }
    }

    /// Half of the Rasmussen invariant. Mirror negates.
    pub fn s_half(&self) -> i64 {
        match (&self.base, self.named_entry()) {
            (GeneratorBase::Torus { .. }, _) => self.sign() * self.torus_genus().unwrap(),
            (_, Some(e)) => self.sign() * e.s_half,
            _ => unreachable!(),
        }
    }

    pub fn u_upper(&self) -> i64 {
        match (&self.base, self.named_entry()) {
            (GeneratorBase::Torus { .. }, _) => self.torus_genus().unwrap(),
            (_, Some(e)) => e.u_upper,
            _ => unreachable!(),
        }
    }

    pub fn g4_upper(&self) -> i64 {
        match (&self.base, self.named_entry()) {
            (GeneratorBase::Torus { .. }, _) => self.torus_genus().unwrap(),
            (_, Some(e)) => e.g4_upper,
            _ => unreachable!(),
        }
    }

    pub fn gamma4_upper(&self) -> i64 {
        if let Some(n) = self.gamma4_exact() {
            return n;
        }
        match (&self.base, self.named_entry()) {
            (GeneratorBase::Torus { .. }, _) => 2 * self.g4_upper() + 1,
            (_, Some(e)) => e.gamma4_upper,
            _ => unreachable!(),
        }
    }

    /// Exact nonorientable 4-genus where the atlas knows it: `T(2,q)` bounds
    /// a Moebius band (gamma4 = 1), and Batson's family `T(2n+2,2n+1)` has
    /// gamma4 = n. Mirrors share the value.
    pub fn gamma4_exact(&self) -> Option<i64> {
        match self.base {
            GeneratorBase::Torus { p: 2, .. } => Some(1),
            GeneratorBase::Torus { p, q } if q == p + 1 && p % 2 == 1 => Some(((p - 1) / 2) as i64),
            _ => None,
        }
    }

    /// H_1 of the degree-`m` cyclic branched cover. Mirrors and reverses do
    /// not change the isomorphism type.
    pub fn cover_homology(&self, m: i64) -> Result<FiniteAbelianGroup> {
        if m < 2 {
            return Err(Error::InvalidCoverDegree(m));
        }
        match (&self.base, self.named_entry()) {
            (&GeneratorBase::Torus { p, q }, _) => {
                // Milnor: Sigma_m(T(p,q)) = Sigma(p, q, m).
                brieskorn::homology(&BrieskornWeights::new(p, q, m as u64)?)
            }
            (_, Some(e)) => e.covers.get(&m).cloned().ok_or(Error::UnsupportedCover {
                generator: self.to_string(),
                degree: m,
            }),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for GeneratorKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match &self.base {
            GeneratorBase::Torus { p, q } => format!("T({p},{q})"),
            GeneratorBase::Named(n) => n.surface_name().to_string(),
        };
        let body = if self.reversed { format!("r({body})") } else { body };
        let body = if self.mirrored { format!("m({body})") } else { body };
        write!(f, "{body}")
    }
}

/// Exact interval certificate for an invariant that is not algorithmically
/// computable in general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantInterval {
    pub lower: i64,
    pub upper: i64,
}

impl InvariantInterval {
    fn new(lower: i64, upper: i64) -> Self {
        debug_assert!(lower <= upper, "interval [{lower}, {upper}]");
        InvariantInterval { lower, upper }
    }

    pub fn exact(&self) -> bool {
        self.lower == self.upper
    }

    /// The exact value, when the bounds meet.
    pub fn value(&self) -> Option<i64> {
        self.exact().then_some(self.lower)
    }
}

impl fmt::Display for InvariantInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact() {
            write!(f, "{}", self.lower)
        } else {
            write!(f, "[{}, {}]", self.lower, self.upper)
        }
    }
}

/// A formal connected sum of atlas generators; the empty sum is the unknot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FormalKnot {
    summands: BTreeMap<GeneratorKnot, u32>,
}

impl FormalKnot {
    pub fn unknot() -> Self {
        FormalKnot::default()
    }

    pub fn generator(g: GeneratorKnot) -> Self {
        FormalKnot::unknot().with(g, 1)
    }

    /// Adds `mult` copies of a generator.
    pub fn with(mut self, g: GeneratorKnot, mult: u32) -> Self {
        if mult > 0 {
            *self.summands.entry(g).or_insert(0) += mult;
        }
        self
    }

    pub fn is_unknot(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> impl Iterator<Item = (&GeneratorKnot, u32)> {
        self.summands.iter().map(|(g, &m)| (g, m))
    }

    pub fn total_summands(&self) -> u32 {
        self.summands.values().sum()
    }

    pub fn connected_sum(&self, other: &FormalKnot) -> FormalKnot {
        let mut out = self.clone();
        for (g, m) in other.summands() {
            out = out.with(g.clone(), m);
        }
        out
    }

    /// Toggles both decorations on every generator.
    pub fn reverse_mirror(&self) -> FormalKnot {
        let mut out = FormalKnot::unknot();
        for (g, m) in self.summands() {
            out = out.with(g.mirror().reverse(), m);
        }
        out
    }

    /// Multiset containment.
    pub fn contains(&self, other: &FormalKnot) -> bool {
        other
            .summands()
            .all(|(g, m)| self.summands.get(g).copied().unwrap_or(0) >= m)
    }

    /// Multiset difference; requires `self.contains(other)`.
    pub fn without(&self, other: &FormalKnot) -> FormalKnot {
        debug_assert!(self.contains(other));
        let mut out = FormalKnot::unknot();
        for (g, m) in self.summands() {
            let rest = m - other.summands.get(g).copied().unwrap_or(0);
            out = out.with(g.clone(), rest);
        }
        out
    }

    /// The non-shared parts of two formal knots: `(self - common, other - common)`.
    pub fn cancel_common(&self, other: &FormalKnot) -> (FormalKnot, FormalKnot) {
        let mut a = FormalKnot::unknot();
        let mut b = FormalKnot::unknot();
        for (g, m) in self.summands() {
            let o = other.summands.get(g).copied().unwrap_or(0);
            a = a.with(g.clone(), m.saturating_sub(o));
        }
        for (g, m) in other.summands() {
            let s = self.summands.get(g).copied().unwrap_or(0);
            b = b.with(g.clone(), m.saturating_sub(s));
        }
        (a, b)
    }

    pub fn tau(&self) -> i64 {
        self.summands().map(|(g, m)| g.tau() * m as i64).sum()
    }

    pub fn s_half(&self) -> i64 {
        self.summands().map(|(g, m)| g.s_half() * m as i64).sum()
    }

    /// Smooth orientable 4-genus: lower bound from |tau| and |s'|, upper
    /// bound from subadditivity over atlas summands.
    pub fn g4_interval(&self) -> InvariantInterval {
        let upper: i64 = self.summands().map(|(g, m)| g.g4_upper() * m as i64).sum();
        let lower = self.tau().abs().max(self.s_half().abs());
        InvariantInterval::new(lower.min(upper), upper)
    }

    /// Unknotting number: upper bound by unknotting summands one at a time,
    /// lower bound from g4 and Wendt's e_2 bound.
    pub fn u_interval(&self) -> InvariantInterval {
        let upper: i64 = self.summands().map(|(g, m)| g.u_upper() * m as i64).sum();
        let mut lower = self.g4_interval().lower;
        if let Ok(e2) = self.e(2) {
            lower = lower.max(e2 as i64);
        }
        InvariantInterval::new(lower.min(upper), upper)
    }

    /// Smooth nonorientable 4-genus; exact only for single atlas generators
    /// with a tabulated value.
    pub fn gamma4_interval(&self) -> InvariantInterval {
        let upper: i64 = self.summands().map(|(g, m)| g.gamma4_upper() * m as i64).sum();
        let mut lower = 0;
        if self.summands.len() == 1 {
            let (g, m) = self.summands().next().unwrap();
            if m == 1 {
                if let Some(v) = g.gamma4_exact() {
                    lower = v;
                }
            }
        }
        InvariantInterval::new(lower.min(upper), upper)
    }

    /// H_1 of the degree-`m` cyclic branched cover, summed over summands.
    pub fn branched_cover_homology(&self, m: i64) -> Result<FiniteAbelianGroup> {
        if m < 2 {
            return Err(Error::InvalidCoverDegree(m));
        }
        let mut group = FiniteAbelianGroup::trivial();
        for (g, mult) in self.summands() {
            group = group.direct_sum(&g.cover_homology(m)?.multiple(mult as usize));
        }
        Ok(group)
    }

    /// e_m: minimal generator count of the cover homology over Z.
    pub fn e(&self, m: i64) -> Result<usize> {
        Ok(self.branched_cover_homology(m)?.min_generators())
    }

    /// e_m^p: dimension of the cover homology mod p.
    pub fn e_mod_p(&self, m: i64, p: u64) -> Result<usize> {
        self.branched_cover_homology(m)?.mod_p_dimension(p)
    }
}

impl fmt::Display for FormalKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unknot() {
            return write!(f, "U");
        }
        let parts: Vec<String> = self
            .summands()
            .map(|(g, m)| if m == 1 { g.to_string() } else { format!("{m}*{g}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Shorthand used throughout tests and witness constructions.
pub fn torus(p: i64, q: i64) -> FormalKnot {
    FormalKnot::generator(GeneratorKnot::torus(p, q).unwrap())
}
