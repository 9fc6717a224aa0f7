//! Monte-Carlo estimates of the transmission failure rate (TFR) of the
//! multi-protection routing scheme under uniformly injected node faults.
//!
//! A transmission from `s` to `d` succeeds when at least one of the `C(t, 2)`
//! protection routings toward `d` delivers it. Trials are independent: trial
//! `i` draws everything from its own ChaCha stream `i` under the master seed,
//! so results do not depend on how trials are spread over threads.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::address::VertexClass;
use crate::cist::{build_with_graph, CistSet};
use crate::error::{Error, Result};
use crate::protection::{
    build_mpr, delivers, FaultSet, ForwardMode, ProtectionRouting, WalkScratch,
};
use crate::topology::{LogicGraph, Params, VertexId};

/// Source/destination class pair of one transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransmissionType {
    EdgeEdge,
    EdgeCore,
    CoreCore,
}

/// Probabilities of edge-edge, edge-core and core-core transmissions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficModel {
    id: u8,
    ratios: [f64; 3],
}

impl TrafficModel {
    pub const MODEL_1: TrafficModel = TrafficModel {
        id: 1,
        ratios: [0.15, 0.35, 0.50],
    };
    pub const MODEL_2: TrafficModel = TrafficModel {
        id: 2,
        ratios: [0.15, 0.50, 0.35],
    };
    pub const MODEL_3: TrafficModel = TrafficModel {
        id: 3,
        ratios: [0.30, 0.35, 0.35],
    };

    pub fn all() -> [TrafficModel; 3] {
        [Self::MODEL_1, Self::MODEL_2, Self::MODEL_3]
    }

    pub fn by_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Self::MODEL_1),
            2 => Ok(Self::MODEL_2),
            3 => Ok(Self::MODEL_3),
            _ => Err(Error::params(format!("unknown traffic model {id}"))),
        }
    }

    /// A model with arbitrary ratios; `id` is only used for reporting.
    pub fn custom(id: u8, ratios: [f64; 3]) -> Result<Self> {
        let sum: f64 = ratios.iter().sum();
        if ratios.iter().any(|r| !(0.0..=1.0).contains(r)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::params(format!(
                "traffic ratios {ratios:?} are not a probability split"
            )));
        }
        Ok(TrafficModel { id, ratios })
    }

    pub fn id(&self) -> u8 {
        self.id
    }

    /// (edge-edge, edge-core, core-core).
    pub fn ratios(&self) -> [f64; 3] {
        self.ratios
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> TransmissionType {
        let u: f64 = rng.random();
        let [ee, ec, _] = self.ratios;
        if u < ee {
            TransmissionType::EdgeEdge
        } else if u < ee + ec {
            TransmissionType::EdgeCore
        } else {
            TransmissionType::CoreCore
        }
    }
}

/// Precomputed class members for endpoint draws.
#[derive(Debug, Clone)]
pub struct EndpointSampler {
    edge: Vec<VertexId>,
    core: Vec<VertexId>,
}

impl EndpointSampler {
    pub fn new(g: &LogicGraph) -> Self {
        EndpointSampler {
            edge: g.class_members(VertexClass::Edge),
            core: g.class_members(VertexClass::Core),
        }
    }

    /// Errors if a transmission type with positive probability cannot be
    /// drawn on this graph.
    pub fn check(&self, model: &TrafficModel) -> Result<()> {
        let [ee, ec, cc] = model.ratios;
        let short = |need: bool, what: &str| {
            if need {
                Err(Error::Config(format!(
                    "traffic model {} needs {what}, which this graph lacks",
                    model.id
                )))
            } else {
                Ok(())
            }
        };
        short(ee > 0.0 && self.edge.len() < 2, "two edge servers")?;
        short(
            ec > 0.0 && (self.edge.is_empty() || self.core.is_empty()),
            "edge and core servers",
        )?;
        short(cc > 0.0 && self.core.len() < 2, "two core servers")
    }

    /// Draws `(s, d)` with `s != d`; candidates failing `allowed` are
    /// rejected. Call [`check`](Self::check) first.
    fn sample_filtered<R: Rng>(
        &self,
        model: &TrafficModel,
        rng: &mut R,
        allowed: impl Fn(VertexId) -> bool,
    ) -> (VertexId, VertexId) {
        let pick = |pool: &[VertexId], rng: &mut R| loop {
            let v = pool[rng.random_range(0..pool.len())];
            if allowed(v) {
                return v;
            }
        };
        let (pool_a, pool_b, swap) = match model.draw(rng) {
            TransmissionType::EdgeEdge => (&self.edge, &self.edge, false),
            TransmissionType::CoreCore => (&self.core, &self.core, false),
            TransmissionType::EdgeCore => (&self.edge, &self.core, rng.random::<bool>()),
        };
        let a = pick(pool_a, rng);
        let b = loop {
            let b = pick(pool_b, rng);
            if b != a {
                break b;
            }
        };
        if swap {
            (b, a)
        } else {
            (a, b)
        }
    }

    pub fn sample<R: Rng>(
        &self,
        model: &TrafficModel,
        rng: &mut R,
    ) -> Result<(VertexId, VertexId)> {
        self.check(model)?;
        Ok(self.sample_filtered(model, rng, |_| true))
    }
}

/// One `(s, d)` draw from the model's class split.
pub fn sample_endpoints<R: Rng>(
    g: &LogicGraph,
    model: &TrafficModel,
    rng: &mut R,
) -> Result<(VertexId, VertexId)> {
    EndpointSampler::new(g).sample(model, rng)
}

/// Uniform sample of `size` vertices from `V \ {s, d}`.
pub fn sample_faults<R: Rng>(
    vertex_count: usize,
    size: usize,
    (s, d): (VertexId, VertexId),
    rng: &mut R,
) -> Result<FaultSet> {
    let mut out = FaultSet::new(vertex_count);
    sample_faults_into(vertex_count, size, (s, d), rng, &mut out)?;
    Ok(out)
}

fn sample_faults_into<R: Rng>(
    vertex_count: usize,
    size: usize,
    (s, d): (VertexId, VertexId),
    rng: &mut R,
    out: &mut FaultSet,
) -> Result<()> {
    if s == d {
        return Err(Error::params("fault exclusion needs distinct endpoints"));
    }
    if size + 2 > vertex_count {
        return Err(Error::params(format!(
            "cannot place {size} faults on {vertex_count} vertices with two excluded"
        )));
    }
    let (lo, hi) = if s < d {
        (s.index(), d.index())
    } else {
        (d.index(), s.index())
    };
    out.clear();
    for x in index::sample(rng, vertex_count - 2, size) {
        let mut v = x;
        if v >= lo {
            v += 1;
        }
        if v >= hi {
            v += 1;
        }
        out.insert(VertexId::from_index(v));
    }
    Ok(())
}

/// True iff at least one routing delivers from `s`.
pub fn run_trial(
    routings: &[ProtectionRouting],
    s: VertexId,
    d: VertexId,
    faults: &FaultSet,
    mode: ForwardMode,
) -> Result<bool> {
    if routings.iter().any(|r| r.destination() != d) {
        return Err(Error::params("routings do not share the trial destination"));
    }
    if s == d || faults.contains(s) || faults.contains(d) {
        return Err(Error::params("endpoints must be distinct and fault-free"));
    }
    let n = routings.first().map_or(0, |r| r.vertex_count());
    let mut scratch = WalkScratch::new(n);
    Ok(any_delivers(routings, s, faults, mode, &mut scratch))
}

fn any_delivers(
    routings: &[ProtectionRouting],
    s: VertexId,
    faults: &FaultSet,
    mode: ForwardMode,
    scratch: &mut WalkScratch,
) -> bool {
    routings
        .iter()
        .any(|r| delivers(r, s, faults, mode, scratch))
}

/// One experiment point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: Params,
    pub model: TrafficModel,
    pub trials: u64,
    pub faults: usize,
    pub threshold: f64,
    pub mode: ForwardMode,
    pub seed: u64,
    /// Draw one fault set for the whole batch instead of one per trial.
    pub fixed_faults: bool,
    /// Worker cap; `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub const DEFAULT_TRIALS: u64 = 100_000;
    pub const DEFAULT_THRESHOLD: f64 = 0.005;

    pub fn new(n: usize, m: usize, k: usize, model: TrafficModel) -> Result<Self> {
        Ok(ExperimentConfig {
            params: Params::new(n, m, k)?,
            model,
            trials: Self::DEFAULT_TRIALS,
            faults: 2,
            threshold: Self::DEFAULT_THRESHOLD,
            mode: ForwardMode::Forwarding,
            seed: 0,
            fixed_faults: false,
            threads: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials == 0 {
            return Err(Error::params("trials must be at least 1"));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::params(format!(
                "threshold {} is outside (0, 1)",
                self.threshold
            )));
        }
        if self.faults + 2 > self.params.vertex_count() {
            return Err(Error::params(format!(
                "{} faults leave no room for two endpoints on {} vertices",
                self.faults,
                self.params.vertex_count()
            )));
        }
        Ok(())
    }
}

/// Result of one experiment point. `elapsed` is not part of the CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfrRecord {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub model: u8,
    pub faults: usize,
    pub trials: u64,
    pub failures: u64,
    pub tfr: f64,
    pub mode: ForwardMode,
    pub seed: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Graph, CISTs and per-destination routings shared by every experiment on
/// one L-RCube. Routings are built on first use of each destination.
pub struct Simulator {
    graph: LogicGraph,
    cists: CistSet,
    sampler: EndpointSampler,
    routings: Vec<OnceLock<Vec<ProtectionRouting>>>,
    pool: rayon::ThreadPool,
}

const BLOCK: u64 = 512;
const FIXED_FAULT_STREAM: u64 = u64::MAX;

impl Simulator {
    pub fn new(params: Params, threads: Option<usize>) -> Result<Self> {
        let (graph, cists) = build_with_graph(params.n, params.m, params.k)?;
        if cists.len() < 2 {
            return Err(Error::UnsupportedParameters {
                n: params.n,
                m: params.m,
                k: params.k,
                reason: "multi-protection routing needs at least two trees",
            });
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        let routings = (0..graph.vertex_count()).map(|_| OnceLock::new()).collect();
        Ok(Simulator {
            sampler: EndpointSampler::new(&graph),
            graph,
            cists,
            routings,
            pool,
        })
    }

    pub fn graph(&self) -> &LogicGraph {
        &self.graph
    }

    pub fn cists(&self) -> &CistSet {
        &self.cists
    }

    /// The `C(t, 2)` routings toward `d`.
    pub fn routings(&self, d: VertexId) -> &[ProtectionRouting] {
        self.routings[d.index()]
            .get_or_init(|| build_mpr(&self.cists, d).expect("constructed trees form a CIST set"))
    }

    /// Runs one experiment point. The graph parameters of `cfg` must match.
    pub fn run(&self, cfg: &ExperimentConfig) -> Result<TfrRecord> {
        cfg.validate()?;
        if cfg.params != self.graph.params() {
            return Err(Error::params(
                "experiment parameters differ from the simulator's graph",
            ));
        }
        self.sampler.check(&cfg.model)?;
        let start = Instant::now();
        let n = self.graph.vertex_count();

        let fixed = if cfg.fixed_faults {
            let mut rng = trial_rng(cfg.seed, FIXED_FAULT_STREAM);
            let mut set = FaultSet::new(n);
            for v in index::sample(&mut rng, n, cfg.faults) {
                set.insert(VertexId::from_index(v));
            }
            self.check_survivors(&set, &cfg.model)?;
            Some(set)
        } else {
            None
        };

        let blocks = cfg.trials.div_ceil(BLOCK);
        let failures: u64 = self.pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .map_init(
                    || (WalkScratch::new(n), FaultSet::new(n)),
                    |(scratch, faults), b| {
                        let lo = b * BLOCK;
                        let hi = (lo + BLOCK).min(cfg.trials);
                        (lo..hi)
                            .filter(|&i| !self.trial(cfg, i, fixed.as_ref(), scratch, faults))
                            .count() as u64
                    },
                )
                .sum()
        });

        Ok(TfrRecord {
            n: cfg.params.n,
            m: cfg.params.m,
            k: cfg.params.k,
            model: cfg.model.id,
            faults: cfg.faults,
            trials: cfg.trials,
            failures,
            tfr: failures as f64 / cfg.trials as f64,
            mode: cfg.mode,
            seed: cfg.seed,
            elapsed: start.elapsed(),
        })
    }

    fn check_survivors(&self, faults: &FaultSet, model: &TrafficModel) -> Result<()> {
        let alive = |pool: &[VertexId]| pool.iter().filter(|&&v| !faults.contains(v)).count();
        let survivors = EndpointSampler {
            edge: vec![VertexId(0); alive(&self.sampler.edge)],
            core: vec![VertexId(0); alive(&self.sampler.core)],
        };
        survivors.check(model)
    }

    /// Returns true on a successful transmission.
    fn trial(
        &self,
        cfg: &ExperimentConfig,
        i: u64,
        fixed: Option<&FaultSet>,
        scratch: &mut WalkScratch,
        faults: &mut FaultSet,
    ) -> bool {
        let mut rng = trial_rng(cfg.seed, i);
        let (s, d, faults) = match fixed {
            Some(set) => {
                let (s, d) = self
                    .sampler
                    .sample_filtered(&cfg.model, &mut rng, |v| !set.contains(v));
                (s, d, set)
            }
            None => {
                let (s, d) = self.sampler.sample_filtered(&cfg.model, &mut rng, |_| true);
                sample_faults_into(
                    self.graph.vertex_count(),
                    cfg.faults,
                    (s, d),
                    &mut rng,
                    faults,
                )
                .expect("fault count validated");
                (s, d, &*faults)
            }
        };
        any_delivers(self.routings(d), s, faults, cfg.mode, scratch)
    }

    /// Sweeps `|F| = 2, 3, ...` for every model, stopping once `|F| >= 10`
    /// and every model's TFR exceeds the threshold, or at `max_faults`
    /// (default `|V| - 2`). `cfg.model` and `cfg.faults` are ignored.
    pub fn sweep(
        &self,
        cfg: &ExperimentConfig,
        models: &[TrafficModel],
        max_faults: Option<usize>,
    ) -> Result<Vec<TfrRecord>> {
        if models.is_empty() {
            return Err(Error::params("sweep needs at least one traffic model"));
        }
        let cap = self.graph.vertex_count() - 2;
        let last = max_faults.map_or(cap, |f| f.min(cap));
        let mut out = Vec::new();
        for faults in 2..=last {
            let mut all_over = true;
            for &model in models {
                let point = ExperimentConfig {
                    model,
                    faults,
                    ..cfg.clone()
                };
                let rec = self.run(&point)?;
                all_over &= rec.tfr > cfg.threshold;
                out.push(rec);
            }
            if faults >= 10 && all_over {
                break;
            }
        }
        Ok(out)
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Builds a simulator and runs one point.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TfrRecord> {
    cfg.validate()?;
    Simulator::new(cfg.params, cfg.threads)?.run(cfg)
}

/// Builds a simulator and sweeps `cfg.model` alone.
pub fn sweep_until_threshold(cfg: &ExperimentConfig) -> Result<Vec<TfrRecord>> {
    cfg.validate()?;
    Simulator::new(cfg.params, cfg.threads)?.sweep(cfg, &[cfg.model], None)
}

/// The largest `|F|` below the first point of `model` whose TFR exceeds the
/// threshold; `None` if no point exceeds it.
pub fn max_tolerated_faults(records: &[TfrRecord], model: u8, threshold: f64) -> Option<usize> {
    let mut points: Vec<_> = records.iter().filter(|r| r.model == model).collect();
    points.sort_by_key(|r| r.faults);
    points
        .iter()
        .find(|r| r.tfr > threshold)
        .map(|r| r.faults - 1)
}

/// Writes records as CSV with header
/// `n,m,k,model,faults,trials,failures,tfr,mode,seed`.
pub fn write_csv<W: std::io::Write>(records: &[TfrRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)
            .map_err(|e| Error::Config(format!("csv: {e}")))?;
    }
    if records.is_empty() {
        w.write_record([
            "n", "m", "k", "model", "faults", "trials", "failures", "tfr", "mode", "seed",
        ])
        .map_err(|e| Error::Config(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn model_table() {
        assert_eq!(TrafficModel::by_id(1).unwrap().ratios(), [0.15, 0.35, 0.50]);
        assert_eq!(TrafficModel::by_id(2).unwrap().ratios(), [0.15, 0.50, 0.35]);
        assert_eq!(TrafficModel::by_id(3).unwrap().ratios(), [0.30, 0.35, 0.35]);
        assert!(TrafficModel::by_id(4).is_err());
        assert!(TrafficModel::custom(9, [0.5, 0.5, 0.5]).is_err());
    }

    fn class_fractions(model: TrafficModel, draws: usize) -> [f64; 3] {
        let g = LogicGraph::build(3, 5, 1).unwrap();
        let sampler = EndpointSampler::new(&g);
        let mut r = rng(7);
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            let (s, d) = sampler.sample(&model, &mut r).unwrap();
            assert_ne!(s, d);
            let edges = [s, d]
                .iter()
                .filter(|&&v| g.classify(v) == VertexClass::Edge)
                .count();
            counts[2 - edges] += 1;
        }
        counts.map(|c| c as f64 / draws as f64)
    }

    #[test]
    fn endpoint_class_split() {
        let f = class_fractions(TrafficModel::MODEL_2, 100_000);
        assert!((f[1] - 0.50).abs() < 0.01, "{f:?}");
        let f = class_fractions(TrafficModel::MODEL_1, 100_000);
        assert!((f[2] - 0.50).abs() < 0.01, "{f:?}");
        let f = class_fractions(TrafficModel::custom(0, [1.0, 0.0, 0.0]).unwrap(), 2_000);
        assert_eq!(f[0], 1.0);
    }

    #[test]
    fn missing_class_is_a_config_error() {
        let g = LogicGraph::build(4, 0, 1).unwrap();
        let err = sample_endpoints(&g, &TrafficModel::MODEL_1, &mut rng(0)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let core_only = TrafficModel::custom(0, [0.0, 0.0, 1.0]).unwrap();
        assert!(sample_endpoints(&g, &core_only, &mut rng(0)).is_ok());
    }

    #[test]
    fn fault_sample_edges() {
        let (s, d) = (VertexId(3), VertexId(9));
        assert!(sample_faults(12, 0, (s, d), &mut rng(1))
            .unwrap()
            .is_empty());
        let all = sample_faults(12, 10, (s, d), &mut rng(1)).unwrap();
        let expect: Vec<_> = (0..12)
            .map(VertexId)
            .filter(|&v| v != s && v != d)
            .collect();
        assert_eq!(all.iter().collect::<Vec<_>>(), expect);
        assert!(sample_faults(12, 11, (s, d), &mut rng(1)).is_err());
    }

    #[test]
    fn fault_sample_is_uniform() {
        // 64 vertices, 5 faults, 100k draws; each excluded-free vertex is
        // hit with probability 5/62
        let draws = 100_000;
        let (s, d) = (VertexId(10), VertexId(40));
        let mut hits = [0u32; 64];
        let mut r = rng(3);
        let mut set = FaultSet::new(64);
        for _ in 0..draws {
            sample_faults_into(64, 5, (s, d), &mut r, &mut set).unwrap();
            for v in set.iter() {
                hits[v.index()] += 1;
            }
        }
        assert_eq!(hits[s.index()] + hits[d.index()], 0);
        let p = 5.0 / 62.0;
        let mean = draws as f64 * p;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for (v, &h) in hits.iter().enumerate() {
            if v != s.index() && v != d.index() {
                assert!((h as f64 - mean).abs() < 4.0 * sd, "vertex {v}: {h}");
            }
        }
    }

    #[test]
    fn trial_examples() {
        let g = LogicGraph::build(2, 4, 1).unwrap();
        let set = crate::cist::cists_rcube(2, 4, 1).unwrap();
        let v = |s: &str| g.index_of(&s.parse().unwrap()).unwrap();
        let routings = build_mpr(&set, v("13")).unwrap();
        let none = FaultSet::new(12);
        assert!(run_trial(&routings, v("03"), v("13"), &none, ForwardMode::Forwarding).unwrap());
        let two = FaultSet::from_vertices(12, [v("00"), v("01")]);
        assert!(!run_trial(&routings, v("03"), v("13"), &two, ForwardMode::Forwarding).unwrap());
        assert!(run_trial(&routings, v("03"), v("12"), &none, ForwardMode::Forwarding).is_err());
    }

    #[test]
    fn tolerance_gives_zero_failures() {
        let mut cfg = ExperimentConfig::new(3, 5, 1, TrafficModel::MODEL_3).unwrap();
        cfg.faults = 2;
        cfg.trials = 5_000;
        cfg.seed = 11;
        assert_eq!(run_experiment(&cfg).unwrap().failures, 0);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut cfg = ExperimentConfig::new(3, 4, 2, TrafficModel::MODEL_1).unwrap();
        cfg.faults = 12;
        cfg.trials = 3_000;
        cfg.seed = 5;
        let mut a = run_experiment(&ExperimentConfig {
            threads: Some(1),
            ..cfg.clone()
        })
        .unwrap();
        let mut b = run_experiment(&ExperimentConfig {
            threads: Some(4),
            ..cfg
        })
        .unwrap();
        a.elapsed = Duration::ZERO;
        b.elapsed = Duration::ZERO;
        assert_eq!(a, b);
        assert!(a.failures > 0);
    }

    #[test]
    fn fixed_faults_run() {
        let mut cfg = ExperimentConfig::new(3, 4, 1, TrafficModel::MODEL_2).unwrap();
        cfg.faults = 6;
        cfg.trials = 2_000;
        cfg.fixed_faults = true;
        let r = run_experiment(&cfg).unwrap();
        assert!(r.failures <= r.trials);
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(3, 5, 1, TrafficModel::MODEL_1).unwrap();
        cfg.threshold = 1.0;
        assert!(cfg.validate().is_err());
        cfg.threshold = 0.005;
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.faults = 31;
        assert!(cfg.validate().is_err());
        assert!(Simulator::new(Params::new(1, 2, 1).unwrap(), None).is_err());
    }

    #[test]
    fn sweep_stops_at_the_floor() {
        // every point exceeds a tiny threshold from the start
        let mut cfg = ExperimentConfig::new(3, 4, 1, TrafficModel::MODEL_1).unwrap();
        cfg.trials = 400;
        cfg.threshold = 1e-9;
        cfg.mode = ForwardMode::Path;
        let sim = Simulator::new(cfg.params, None).unwrap();
        let recs = sim.sweep(&cfg, &TrafficModel::all(), None).unwrap();
        assert_eq!(recs.len(), 3 * 9);
        assert_eq!(recs.last().unwrap().faults, 10);
        assert_eq!(max_tolerated_faults(&recs, 1, cfg.threshold), Some(1));
    }

    #[test]
    fn csv_layout() {
        let rec = TfrRecord {
            n: 3,
            m: 5,
            k: 1,
            model: 2,
            faults: 4,
            trials: 100,
            failures: 1,
            tfr: 0.01,
            mode: ForwardMode::Path,
            seed: 9,
            elapsed: Duration::from_secs(3),
        };
        let mut buf = Vec::new();
        write_csv(&[rec], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,m,k,model,faults,trials,failures,tfr,mode,seed\n3,5,1,2,4,100,1,0.01,path,9\n"
        );
    }
}
