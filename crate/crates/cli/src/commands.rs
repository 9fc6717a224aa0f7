use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use cist_rcube::io::{
    read_graph_json, read_trees_json, trees_on_graph, trees_standalone, write_edge_list,
    write_graph_json, write_trees_json, RoutingDoc,
};
use cist_rcube::simulate::{
    max_tolerated_faults, write_csv, ExperimentConfig, Simulator, TrafficModel,
};
use cist_rcube::verify::DefinitionalOptions;
use cist_rcube::{
    build_mpr, cists_rcube, configure_pair, verify_cists_characterization,
    verify_cists_definitional, verify_protected, Address, Error, ForwardMode, LogicGraph, Params,
    VerificationReport, VertexId,
};
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::{
    CistArgs, Command, GenArgs, GraphFormat, ModeArg, ModelArg, RouteArgs, SimulateArgs, VerifyArgs,
};

pub const THREADS_VAR: &str = "CIST_RCUBE_THREADS";

#[derive(Debug)]
pub enum Failure {
    /// A check ran and found a violation.
    Verification(String),
    Usage(String),
    Runtime(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Structural(_) | Error::NotDualCist(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Gen(a) => gen(&a),
        Command::Cist(a) => cist(&a),
        Command::Verify(a) => verify(&a),
        Command::Route(a) => route(&a),
        Command::Simulate(a) => simulate(&a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Writes through `body` to `path`, or to standard output when `path` is
/// `None`, then drops a manifest next to the file.
fn emit<P: Serialize>(
    path: Option<&Path>,
    manifest: RunManifest<'_, P>,
    body: impl FnOnce(&mut dyn Write) -> Result<(), Failure>,
) -> Outcome {
    let runtime = |what: &Path, e: io::Error| {
        Failure::Runtime(format!("cannot write {}: {e}", what.display()))
    };
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|e| runtime(path, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush().map_err(|e| runtime(path, e))?;
            manifest.write_beside(path).map_err(|e| runtime(path, e))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()
                .map_err(|e| Failure::Runtime(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}

fn newline(w: &mut dyn Write) -> Outcome {
    writeln!(w).map_err(|e| Failure::Runtime(e.to_string()))
}

fn gen(a: &GenArgs) -> Outcome {
    let g = LogicGraph::build(a.shape.n, a.shape.m, a.shape.k)?;
    emit(
        a.out.as_deref(),
        RunManifest::new("gen", a, None),
        |w| match a.format {
            GraphFormat::Json => {
                write_graph_json(&g, &mut *w)?;
                newline(w)
            }
            GraphFormat::Edgelist => Ok(write_edge_list(&g, w)?),
        },
    )
}

fn cist(a: &CistArgs) -> Outcome {
    let crate::Shape { n, m, k } = a.shape;
    let g = LogicGraph::build(n, m, k)?;
    let set = cists_rcube(n, m, k)?;
    if a.verify {
        report(&g, verify_cists_characterization(&g, &set)?)?;
    }
    emit(Some(&a.out), RunManifest::new("cist", a, None), |w| {
        write_trees_json(&g, &set, &mut *w)?;
        newline(w)
    })?;
    eprintln!(
        "{} trees over {} vertices written to {}",
        set.len(),
        g.vertex_count(),
        a.out.display()
    );
    Ok(())
}

/// Prints the verdict; a failing verdict becomes exit code 1.
fn report(g: &LogicGraph, r: VerificationReport) -> Outcome {
    match r {
        VerificationReport::Pass => {
            println!("pass");
            Ok(())
        }
        VerificationReport::Fail(w) => {
            let legend: Vec<String> = w
                .vertices()
                .into_iter()
                .map(|v| format!("{v} = {}", g.label(v)))
                .collect();
            let mut msg = format!("fail: {w}");
            if !legend.is_empty() {
                msg += &format!(" [{}]", legend.join(", "));
            }
            println!("{msg}");
            Err(Failure::Verification(msg))
        }
    }
}

fn verify(a: &VerifyArgs) -> Outcome {
    // malformed inputs and non-spanning trees are usage errors here, not runtime ones
    let structural = |e: Error| Failure::Usage(e.to_string());
    let g = read_graph_json(open(&a.graph)?).map_err(structural)?;
    let doc = read_trees_json(open(&a.trees)?).map_err(structural)?;
    let set = trees_on_graph(&g, &doc).map_err(structural)?;
    let characterization = verify_cists_characterization(&g, &set).map_err(structural)?;
    if a.definitional {
        let opts = DefinitionalOptions {
            cap: a.cap,
            force: a.force,
        };
        let definitional = verify_cists_definitional(&g, &set, opts)?;
        if definitional.is_pass() != characterization.is_pass() {
            return Err(Failure::Runtime(format!(
                "checkers disagree: characterization {characterization:?}, definitional {definitional:?}"
            )));
        }
    }
    report(&g, characterization)
}

fn route(a: &RouteArgs) -> Outcome {
    let doc = read_trees_json(open(&a.trees)?)?;
    let dest: Address = a
        .dest
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let (graph, names, set) = match &a.graph {
        Some(path) => {
            let g = read_graph_json(open(path)?)?;
            let set = trees_on_graph(&g, &doc)?;
            let names = g.vertices().map(|v| g.address(v)).collect::<Vec<_>>();
            (Some(g), names, set)
        }
        None => {
            let (names, set) = trees_standalone(&doc)?;
            (None, names, set)
        }
    };
    let d = names
        .binary_search(&dest)
        .map(VertexId::from_index)
        .map_err(|_| Failure::Usage(format!("destination {dest} is not a vertex of the trees")))?;

    let routings = if a.all_pairs {
        build_mpr(&set, d)?
    } else {
        let (x, y) = a.pair.unwrap_or((0, 1));
        vec![configure_pair(&set, x, y, d)?]
    };
    if let (true, Some(g)) = (a.verify, &graph) {
        for r in &routings {
            if let fail @ VerificationReport::Fail(_) = verify_protected(g, r) {
                eprintln!("routing for pair {:?}:", r.trees());
                return report(g, fail);
            }
        }
        println!("pass");
    }

    let docs: Vec<RoutingDoc> = routings
        .iter()
        .map(|r| RoutingDoc::new(r, &names))
        .collect();
    emit(Some(&a.out), RunManifest::new("route", a, None), |w| {
        let json = if a.all_pairs {
            serde_json::to_writer(&mut *w, &docs)
        } else {
            serde_json::to_writer(&mut *w, &docs[0])
        };
        json.map_err(|e| Failure::Runtime(e.to_string()))?;
        newline(w)
    })
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_VAR) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "{THREADS_VAR} must be a positive integer, got {v:?}"
                ))
            }),
        _ => Ok(None),
    }
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let crate::Shape { n, m, k } = a.shape;
    let params = Params::new(n, m, k)?;
    let threads = threads_from_env()?;
    let seed = a.seed.unwrap_or_else(rand::random);
    let models: Vec<TrafficModel> = match a.model {
        ModelArg::One => vec![TrafficModel::MODEL_1],
        ModelArg::Two => vec![TrafficModel::MODEL_2],
        ModelArg::Three => vec![TrafficModel::MODEL_3],
        ModelArg::All => TrafficModel::all().to_vec(),
    };
    let mode = match a.mode {
        ModeArg::Forwarding => ForwardMode::Forwarding,
        ModeArg::Path => ForwardMode::Path,
        ModeArg::Detour => ForwardMode::Detour,
    };
    let mut cfg = ExperimentConfig::new(n, m, k, models[0])?;
    cfg.trials = a.trials;
    cfg.threshold = a.threshold;
    cfg.mode = mode;
    cfg.seed = seed;
    cfg.fixed_faults = a.fixed_faults;
    cfg.threads = threads;
    if let Some(f) = a.faults {
        cfg.faults = f;
    }
    cfg.validate()?;

    let sim = Simulator::new(params, threads)?;
    let records = if a.sweep {
        sim.sweep(&cfg, &models, a.max_faults)?
    } else {
        models
            .iter()
            .map(|&model| {
                sim.run(&ExperimentConfig {
                    model,
                    ..cfg.clone()
                })
            })
            .collect::<Result<Vec<_>, _>>()?
    };

    emit(
        a.out.as_deref(),
        RunManifest::new("simulate", a, Some(seed)),
        |w| Ok(write_csv(&records, w)?),
    )?;

    if a.seed.is_none() {
        eprintln!("seed {seed}");
    }
    if a.sweep {
        for model in &models {
            match max_tolerated_faults(&records, model.id(), a.threshold) {
                Some(f) => eprintln!(
                    "model {}: tolerates {f} faults at threshold {}",
                    model.id(),
                    a.threshold
                ),
                None => eprintln!("model {}: threshold not exceeded", model.id()),
            }
        }
    }
    Ok(())
}
