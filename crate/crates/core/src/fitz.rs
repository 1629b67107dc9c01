//! Couplings on graphs, Fitzpatrick functions and subspace conjugates.
//!
//! Suprema over infinite graphs are only available in closed form for the
//! skew operators handled here: G in the first system, and G, ¬G in the second
//! system. [`fitz_sampled`] evaluates the same supremum over a finite sample
//! and is therefore a lower bound.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gossez::apply_g;
use crate::linalg;
use crate::measure::{apply_gstar, ModelMeasure};
use crate::point::{natural_couple, DualSystem, PairPoint};
use crate::rational::{self, Rational};
use crate::sparse::SparseSeq;
use crate::tail::TailSeq;
use crate::verdict::{PropertyVerdict, Status, Witness, WitnessKind};

/// Value in ℝ ∪ {±∞}. The derived order puts −∞ first and +∞ last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedValue {
    MinusInfinity,
    Finite(Rational),
    PlusInfinity,
}

impl ExtendedValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    pub fn zero() -> Self {
        ExtendedValue::Finite(Rational::zero())
    }

    /// Comparison against a finite value.
    pub fn cmp_finite(&self, v: &Rational) -> Ordering {
        match self {
            ExtendedValue::MinusInfinity => Ordering::Less,
            ExtendedValue::Finite(a) => a.cmp(v),
            ExtendedValue::PlusInfinity => Ordering::Greater,
        }
    }

    fn indicator(member: bool) -> Self {
        if member {
            Self::zero()
        } else {
            ExtendedValue::PlusInfinity
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::MinusInfinity => f.write_str("-inf"),
            ExtendedValue::Finite(v) => f.write_str(&rational::to_text(v)),
            ExtendedValue::PlusInfinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtendedValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "-inf" => Ok(ExtendedValue::MinusInfinity),
            "+inf" => Ok(ExtendedValue::PlusInfinity),
            other => rational::parse(other)
                .map(ExtendedValue::Finite)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// A finite sample of a graph in one dual system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledGraph {
    pub system: DualSystem,
    pub source: String,
    pub points: Vec<PairPoint>,
}

impl SampledGraph {
    /// Drops duplicate points, keeping first occurrences in order.
    pub fn new(system: DualSystem, source: impl Into<String>, points: Vec<PairPoint>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::with_capacity(points.len());
        for p in points {
            if p.system() != system {
                return Err(LabError::SystemMismatch {
                    left: system,
                    right: p.system(),
                });
            }
            if seen.insert(p.clone()) {
                kept.push(p);
            }
        }
        Ok(Self {
            system,
            source: source.into(),
            points: kept,
        })
    }

    pub fn empty(system: DualSystem) -> Self {
        Self {
            system,
            source: "empty".into(),
            points: Vec::new(),
        }
    }

    /// Points `(x, Gx)`, embedded into the second system when asked.
    pub fn graph_g(xs: &[SparseSeq], system: DualSystem) -> Self {
        let points = xs
            .iter()
            .map(|x| {
                let p = PairPoint::first(x.clone(), apply_g(x));
                match system {
                    DualSystem::First => p,
                    DualSystem::Second => p.embed(),
                }
            })
            .collect();
        Self::new(system, "Graph G", points).expect("uniform system")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, z: &PairPoint) -> bool {
        self.points.contains(z)
    }
}

/// `A ↦ {(x, −y) : (x, y) ∈ A}`.
pub fn neg_transform(a: &SampledGraph) -> SampledGraph {
    SampledGraph {
        system: a.system,
        source: format!("neg({})", a.source),
        points: a.points.iter().map(PairPoint::negate_y).collect(),
    }
}

/// `c(z)`.
pub fn eval_c(z: &PairPoint) -> Result<Rational> {
    z.coupling()
}

/// `c_A = c + ι_A`.
pub fn eval_ca(z: &PairPoint, a: &SampledGraph) -> Result<ExtendedValue> {
    if a.contains(z) {
        Ok(ExtendedValue::Finite(eval_c(z)?))
    } else {
        Ok(ExtendedValue::PlusInfinity)
    }
}

/// `max_{w ∈ A} (z·w − c(w))`, −∞ on an empty sample.
pub fn fitz_sampled(z: &PairPoint, a: &SampledGraph) -> Result<ExtendedValue> {
    Ok(fitz_sampled_argmax(z, a)?
        .map(|(_, v)| ExtendedValue::Finite(v))
        .unwrap_or(ExtendedValue::MinusInfinity))
}

/// Maximising sample point and value; the first maximiser wins ties.
pub fn fitz_sampled_argmax(z: &PairPoint, a: &SampledGraph) -> Result<Option<(usize, Rational)>> {
    let mut best: Option<(usize, Rational)> = None;
    for (i, w) in a.points.iter().enumerate() {
        let v = natural_couple(z, w)? - w.coupling()?;
        if best.as_ref().is_none_or(|(_, b)| &v > b) {
            best = Some((i, v));
        }
    }
    Ok(best)
}

fn require(z: &PairPoint, system: DualSystem) -> Result<()> {
    if z.system() == system {
        Ok(())
    } else {
        Err(LabError::SystemMismatch {
            left: system,
            right: z.system(),
        })
    }
}

/// φ_G in (ℓ₁, ℓ∞): the indicator of Graph G.
///
/// `φ_G(x, y) = sup_u ⟨u, y − Gx⟩`, which is 0 or +∞.
pub fn fitz_closed_first(z: &PairPoint) -> Result<ExtendedValue> {
    require(z, DualSystem::First)?;
    let PairPoint::First { x, y } = z else { unreachable!() };
    Ok(ExtendedValue::indicator(*y == apply_g(x)))
}

/// Φ_G in (ℓ∞*, ℓ∞): the indicator of Graph(¬G*), i.e. `y = a𝟙 + Gμ̄`.
pub fn fitz_closed_second_g(z: &PairPoint) -> Result<ExtendedValue> {
    require(z, DualSystem::Second)?;
    let PairPoint::Second { mu, y } = z else { unreachable!() };
    Ok(ExtendedValue::indicator(*y == -&apply_gstar(mu)))
}

/// Φ_{¬G} in (ℓ∞*, ℓ∞): the indicator of Graph(G*).
pub fn fitz_closed_second_neg_g(z: &PairPoint) -> Result<ExtendedValue> {
    require(z, DualSystem::Second)?;
    let PairPoint::Second { mu, y } = z else { unreachable!() };
    Ok(ExtendedValue::indicator(*y == apply_gstar(mu)))
}

/// Functions on Z that the lab can evaluate exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "function", rename_all = "kebab-case")]
pub enum RepresentedFunction {
    /// ι_{Graph G} in the first system; equals φ_G = ψ_G = c_G.
    IndicatorGraphG,
    /// ι_{Graph(¬G*)} in the second system; equals Φ_G.
    IndicatorGraphNegGstar,
    /// ι_{Graph(G*)} in the second system; equals Φ_{¬G}.
    IndicatorGraphGstar,
    /// ι_{cl Graph G} restricted to model points: the embedded graph (zero mass at infinity).
    IndicatorClosure,
    CouplingPlusIndicator { graph: SampledGraph },
    FitzpatrickSampled { graph: SampledGraph },
}

impl RepresentedFunction {
    pub fn system(&self) -> DualSystem {
        match self {
            RepresentedFunction::IndicatorGraphG => DualSystem::First,
            RepresentedFunction::IndicatorGraphNegGstar
            | RepresentedFunction::IndicatorGraphGstar
            | RepresentedFunction::IndicatorClosure => DualSystem::Second,
            RepresentedFunction::CouplingPlusIndicator { graph }
            | RepresentedFunction::FitzpatrickSampled { graph } => graph.system,
        }
    }

    pub fn label(&self) -> String {
        match self {
            RepresentedFunction::IndicatorGraphG => "phi_G (first)".into(),
            RepresentedFunction::IndicatorGraphNegGstar => "Phi_G (second)".into(),
            RepresentedFunction::IndicatorGraphGstar => "Phi_negG (second)".into(),
            RepresentedFunction::IndicatorClosure => "Psi_G (second, model)".into(),
            RepresentedFunction::CouplingPlusIndicator { graph } => format!("c_A[{}]", graph.source),
            RepresentedFunction::FitzpatrickSampled { graph } => {
                format!("phi_A sampled[{}]", graph.source)
            }
        }
    }

    pub fn eval(&self, z: &PairPoint) -> Result<ExtendedValue> {
        match self {
            RepresentedFunction::IndicatorGraphG => fitz_closed_first(z),
            RepresentedFunction::IndicatorGraphNegGstar => fitz_closed_second_g(z),
            RepresentedFunction::IndicatorGraphGstar => fitz_closed_second_neg_g(z),
            RepresentedFunction::IndicatorClosure => {
                require(z, DualSystem::Second)?;
                let PairPoint::Second { mu, y } = z else { unreachable!() };
                let on = mu.infinity_mass.is_zero() && *y == apply_g(&mu.atomic);
                Ok(ExtendedValue::indicator(on))
            }
            RepresentedFunction::CouplingPlusIndicator { graph } => eval_ca(z, graph),
            RepresentedFunction::FitzpatrickSampled { graph } => fitz_sampled(z, graph),
        }
    }
}

/// Powers of ten up to `max`, with `max` itself appended if it is not one.
pub fn scale_ladder(max: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut t = rational::one();
    while &t <= max {
        out.push(t.clone());
        t *= rational::int(10);
    }
    if out.last() != Some(max) && max.is_positive() {
        out.push(max.clone());
    }
    out
}

/// A scaled graph direction pushing the sampled Fitzpatrick value past a threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub direction: SparseSeq,
    pub scale: Rational,
    pub value: Rational,
    pub sample: PairPoint,
}

/// For first-system `z = (x, y)` off Graph G, walks the family
/// `{(t·u, G(t·u)) : t ∈ ladder}` along a direction with `⟨u, y − Gx⟩ = 2`
/// until the sampled Fitzpatrick value exceeds `threshold`.
///
/// Returns `None` for points on the graph, where every such value is 0.
pub fn divergence_search(
    z: &PairPoint,
    threshold: &Rational,
    scale_max: &Rational,
) -> Result<Option<Divergence>> {
    require(z, DualSystem::First)?;
    let PairPoint::First { x, y } = z else { unreachable!() };
    let Some(direction) = separating_direction(&(y - &apply_g(x)), &rational::int(2)) else {
        return Ok(None);
    };
    for t in scale_ladder(scale_max) {
        let u = direction.scale(&t);
        let w = PairPoint::first(u.clone(), apply_g(&u));
        let graph = SampledGraph::new(DualSystem::First, "scaled Graph G", vec![w.clone()])?;
        let value = fitz_sampled(z, &graph)?;
        if value.cmp_finite(threshold) == Ordering::Greater {
            return Ok(Some(Divergence {
                direction: direction.clone(),
                scale: t,
                value: value.finite().cloned().expect("finite on a nonempty sample"),
                sample: w,
            }));
        }
    }
    Ok(None)
}

/// A multiple of `e_k`, `k` the first index where `d` is nonzero, scaled so that
/// `⟨u, d⟩ = target`.
pub fn separating_direction(d: &TailSeq, target: &Rational) -> Option<SparseSeq> {
    let span = d.head().len() + d.period();
    let k = (1..=span).find(|&k| !d.get(k).is_zero())?;
    let coeff = target / d.get(k);
    Some(SparseSeq::unit(k).scale(&coeff))
}

/// Orthogonal complement, under the natural coupling, of a finitely spanned
/// subspace, computed in truncated coordinates.
///
/// Coordinates of a point `(x, y)` with `x` supported in `1..=N` and `y`
/// constant from index `N + 1` on are
/// `x_1..x_N [, a] , y_1..y_N, y_∞` where `a` is the mass at infinity (second
/// system only) and `y_∞` the tail value of `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annihilator {
    pub system: DualSystem,
    pub truncation: usize,
    pub basis: Vec<Vec<Rational>>,
    span: linalg::Span,
}

impl Annihilator {
    pub fn dimension(&self) -> usize {
        coordinate_count(self.system, self.truncation)
    }

    /// Membership of `z`; errors if `z` has no truncated coordinates.
    pub fn contains(&self, z: &PairPoint) -> Result<bool> {
        let v = coordinates(z, self.truncation)?;
        Ok(self.span.contains(&v))
    }

    /// Rebuilds a point from a coordinate vector.
    pub fn point(&self, v: &[Rational]) -> PairPoint {
        let n = self.truncation;
        let x = SparseSeq::from_dense(&v[..n]);
        let offset = match self.system {
            DualSystem::First => n,
            DualSystem::Second => n + 1,
        };
        let y = TailSeq::new(
            v[offset..offset + n].to_vec(),
            crate::tail::Tail::Constant(v[offset + n].clone()),
        )
        .expect("constant tail");
        match self.system {
            DualSystem::First => PairPoint::first(x, y),
            DualSystem::Second => PairPoint::second(ModelMeasure::new(x, v[n].clone()), y),
        }
    }
}

fn coordinate_count(system: DualSystem, n: usize) -> usize {
    match system {
        DualSystem::First => 2 * n + 1,
        DualSystem::Second => 2 * n + 2,
    }
}

/// Truncated coordinates of `z`.
pub fn coordinates(z: &PairPoint, n: usize) -> Result<Vec<Rational>> {
    let outside = |reason: String| LabError::OutsideTruncation {
        truncation: n,
        reason,
    };
    let mu = z.measure();
    if mu.atomic.max_index() > n {
        return Err(outside(format!("first component reaches index {}", mu.atomic.max_index())));
    }
    let y = z.y();
    let Some(tail) = y.limit() else {
        return Err(outside("second component has no constant tail".into()));
    };
    if y.head().len() > n {
        return Err(outside(format!("second component head has length {}", y.head().len())));
    }
    let mut v = mu.atomic.to_dense(n);
    if z.system() == DualSystem::Second {
        v.push(mu.infinity_mass.clone());
    }
    v.extend((1..=n).map(|k| y.get(k)));
    v.push(tail);
    Ok(v)
}

/// Coefficients of the linear form `z ↦ z·w` in truncated coordinates.
fn linear_form(w: &PairPoint, system: DualSystem, n: usize) -> Result<Vec<Rational>> {
    if w.system() != system {
        return Err(LabError::SystemMismatch {
            left: system,
            right: w.system(),
        });
    }
    let u = w.measure();
    if u.atomic.max_index() > n {
        return Err(LabError::OutsideTruncation {
            truncation: n,
            reason: format!("spanning vector reaches index {}", u.atomic.max_index()),
        });
    }
    let v = w.y();
    // c(x, v): x-coordinates pick up v_j, the mass at infinity picks up lim v
    let mut form: Vec<Rational> = (1..=n).map(|j| v.get(j)).collect();
    if system == DualSystem::Second {
        let lim = v.limit().ok_or_else(|| {
            LabError::OutsideModelDomain("spanning vector without limit in second system".into())
        })?;
        form.push(lim);
    }
    // c(u, y): y-coordinates pick up ū_k, the tail value picks up u's mass at infinity
    form.extend(u.atomic.to_dense(n));
    form.push(match system {
        DualSystem::First => Rational::zero(),
        DualSystem::Second => u.infinity_mass.clone(),
    });
    Ok(form)
}

/// `{z : z·w = 0 for every w in spanning}` in truncation `n`.
pub fn annihilator_truncated(
    spanning: &[PairPoint],
    n: usize,
    system: DualSystem,
) -> Result<Annihilator> {
    let dim = coordinate_count(system, n);
    let rows = spanning
        .iter()
        .map(|w| linear_form(w, system, n))
        .collect::<Result<Vec<_>>>()?;
    let basis = linalg::nullspace(&rows, dim);
    let span = linalg::Span::new(&basis, dim);
    Ok(Annihilator {
        system,
        truncation: n,
        basis,
        span,
    })
}

/// Checks `z·w = 0` for every `z ∈ b`, `w ∈ a`.
pub fn orthogonality_report(a: &SampledGraph, b: &SampledGraph) -> PropertyVerdict {
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut violation = None;
    'outer: for z in &b.points {
        for w in &a.points {
            match natural_couple(z, w) {
                Ok(v) if v.is_zero() => checked += 1,
                Ok(v) => {
                    checked += 1;
                    violation = Some(Witness::new(
                        WitnessKind::NaturalCouple,
                        vec![z.clone(), w.clone()],
                        v,
                    ));
                    break 'outer;
                }
                Err(_) => skipped += 1,
            }
        }
    }
    let status = match (&violation, skipped) {
        (Some(_), _) => Status::Refuted,
        (None, 0) => Status::VerifiedOnSamples,
        (None, _) => Status::Inconclusive,
    };
    let mut verdict = PropertyVerdict::new("orthogonality", status)
        .stat("pairs_checked", checked)
        .stat("pairs_skipped", skipped)
        .stat("left", a.source.clone())
        .stat("right", b.source.clone());
    if let Some(w) = violation {
        verdict = verdict.witness(w);
    }
    verdict
}
