//! Seeded generation of sample points and probe sets.
//!
//! Everything here is a pure function of a [`ProbeSpec`] (or a seed), so a
//! recorded descriptor reproduces the exact same points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gossez::apply_g;
use crate::measure::{apply_gstar, graph_neg_gstar_point, ModelMeasure};
use crate::point::{DualSystem, PairPoint};
use crate::rational::{self, Rational};
use crate::sparse::SparseSeq;
use crate::tail::{Tail, TailSeq};

/// Seeded source of exact random values.
pub struct Sampler {
    rng: ChaCha8Rng,
    /// Bound on numerators and denominators.
    pub coord_max: i64,
}

impl Sampler {
    pub fn new(seed: u64, coord_max: i64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            coord_max,
        }
    }

    /// Derived stream, independent of how much of `self` was consumed.
    pub fn fork(seed: u64, stream: u64, coord_max: i64) -> Self {
        let mut s = Self::new(seed, coord_max);
        s.rng.set_stream(stream);
        s
    }

    pub fn index(&mut self, max: usize) -> usize {
        self.rng.gen_range(1..=max)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// `p/q` with `|p| ≤ coord_max`, `1 ≤ q ≤ coord_max`.
    pub fn rational(&mut self) -> Rational {
        let p = self.rng.gen_range(-self.coord_max..=self.coord_max);
        let q = self.rng.gen_range(1..=self.coord_max);
        rational::q(p, q)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !num_traits::Zero::is_zero(&r) {
                return r;
            }
        }
    }

    /// Random sparse sequence with at most `max_support` entries in `1..=max_index`.
    pub fn sparse(&mut self, max_support: usize, max_index: usize) -> SparseSeq {
        let support = self.rng.gen_range(0..=max_support.min(max_index));
        let entries: Vec<(usize, Rational)> = (0..support)
            .map(|_| (self.index(max_index), self.nonzero_rational()))
            .collect();
        SparseSeq::from_entries(entries).expect("positive indices")
    }

    pub fn measure(&mut self, max_support: usize, max_index: usize) -> ModelMeasure {
        let atomic = self.sparse(max_support, max_index);
        ModelMeasure::new(atomic, self.rational())
    }

    /// Random convergent sequence with head inside `1..=max_head`.
    pub fn constant_tail(&mut self, max_head: usize) -> TailSeq {
        let h = self.rng.gen_range(0..=max_head);
        let head = (0..h).map(|_| self.rational()).collect();
        TailSeq::new(head, Tail::Constant(self.rational())).expect("constant tail")
    }

    /// Random eventually periodic sequence, period 2 or 3.
    pub fn periodic_tail(&mut self, max_head: usize) -> TailSeq {
        let h = self.rng.gen_range(0..=max_head);
        let head = (0..h).map(|_| self.rational()).collect();
        let p = self.rng.gen_range(2..=3);
        let pattern = (0..p).map(|_| self.rational()).collect();
        TailSeq::new(head, Tail::Periodic(pattern)).expect("nonempty pattern")
    }
}

/// Reproducible probe-set descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub seed: u64,
    pub truncation: usize,
    pub coord_max: i64,
    pub count: usize,
}

impl ProbeSpec {
    pub fn new(seed: u64, truncation: usize, count: usize) -> Self {
        Self {
            seed,
            truncation,
            coord_max: 20,
            count,
        }
    }
}

/// Probe points in one system; evaluable in-model by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSet {
    pub system: DualSystem,
    pub points: Vec<PairPoint>,
    pub generation: ProbeSpec,
}

impl ProbeSet {
    /// Round-robin mix of structured and unstructured points.
    ///
    /// First system: Graph G, Graph G shifted off the graph, free random points.
    /// Second system: Graph(¬G*), Graph(G*), free points with convergent `y`,
    /// and zero-mass points with periodic `y`.
    pub fn generate(spec: ProbeSpec, system: DualSystem) -> Self {
        let stream = match system {
            DualSystem::First => 1,
            DualSystem::Second => 2,
        };
        let mut s = Sampler::fork(spec.seed, stream, spec.coord_max);
        let n = spec.truncation.max(2);
        let support = n.min(8);
        let points = (0..spec.count)
            .map(|i| match system {
                DualSystem::First => match i % 3 {
                    0 => graph_point(&s.sparse(support, n)),
                    1 => off_graph_point(&mut s, n),
                    _ => {
                        let x = s.sparse(support, n);
                        let y = if s.coin(0.5) { s.constant_tail(n) } else { s.periodic_tail(n) };
                        PairPoint::first(x, y)
                    }
                },
                DualSystem::Second => match i % 4 {
                    0 => graph_neg_gstar_point(&s.measure(support, n)),
                    1 => {
                        let mu = s.measure(support, n);
                        let y = apply_gstar(&mu);
                        PairPoint::second(mu, y)
                    }
                    2 => PairPoint::second(s.measure(support, n), s.constant_tail(n)),
                    _ => PairPoint::second(
                        ModelMeasure::atomic_only(s.sparse(support, n)),
                        s.periodic_tail(n),
                    ),
                },
            })
            .collect();
        Self {
            system,
            points,
            generation: spec,
        }
    }

    /// Points `(x, Gx + d)` with `x` and `d ≠ 0` supported in `1..=⌊N/2⌋`.
    pub fn off_graph(spec: ProbeSpec) -> Self {
        let mut s = Sampler::fork(spec.seed, 3, spec.coord_max);
        let n = spec.truncation.max(2);
        let points = (0..spec.count).map(|_| off_graph_point(&mut s, n)).collect();
        Self {
            system: DualSystem::First,
            points,
            generation: spec,
        }
    }
}

pub fn graph_point(x: &SparseSeq) -> PairPoint {
    PairPoint::first(x.clone(), apply_g(x))
}

fn off_graph_point(s: &mut Sampler, n: usize) -> PairPoint {
    let half = (n / 2).max(1);
    let x = s.sparse(half.min(8), half);
    let k = s.index(half);
    let d = &s.sparse(half.min(4), half) + &SparseSeq::unit(k).scale(&s.nonzero_rational());
    let d = if d.is_zero() { SparseSeq::unit(k) } else { d };
    PairPoint::first(x.clone(), &apply_g(&x) + &TailSeq::from_sparse(&d))
}
