//! `lpa`: ideal lattices, prime spectra, and poset realizations of Leavitt
//! path algebras, driven by small JSON documents.
//!
//! Verdicts are payloads, not errors: a command that answers "no" still
//! exits 0. Exit codes: 2 usage, 3 malformed document, 4 cap exceeded,
//! 1 anything else operational.

mod dot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use lpa_core::graph::Graph;
use lpa_core::hss::{
    enumerate_admissible_pairs, enumerate_hss, quotient, AdmissiblePair, PairLattice, Quotient,
    DEFAULT_CAP,
};
use lpa_core::ideal::{
    classify_prime, intersect, parse_field_name, sum, validate, Classification, IdealDoc, IdealRep,
    PrimeWitness,
};
use lpa_core::poly::FieldSpec;
use lpa_core::poset::{
    check_properties_bounded, r_set, realize, verify_realization, FinPoset, DEFAULT_SUBSET_BOUND,
};
use lpa_core::spectrum::{compute_spec_with_lattice, regularity_report};
use lpa_core::sweep::{parse_mult_menu, run_sweep};
use lpa_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "lpa",
    version,
    about = "Ideal theory of Leavitt path algebras over finite graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the hereditary saturated vertex sets of a graph.
    Hss {
        graph: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        /// Write a Hasse diagram of the sets under inclusion.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumerate admissible pairs (the graded-ideal lattice).
    Pairs {
        graph: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
        /// Write a Hasse diagram of the pair lattice.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Quotient graph of an admissible pair document.
    Quotient {
        graph: PathBuf,
        #[arg(long)]
        pair: PathBuf,
    },
    /// Prime spectrum poset, with optional family instantiation.
    Spec {
        graph: PathBuf,
        /// Field for instantiating symbolic families: "Q" or "F<p>".
        #[arg(long)]
        field: Option<String>,
        /// Instantiate families at all irreducibles up to this degree.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Is the ideal semiprime?
    Semiprime {
        graph: PathBuf,
        ideal: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Is the ideal prime? Reports the matched case or the failing clause.
    Prime {
        graph: PathBuf,
        ideal: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Canonical sum of two ideals.
    Sum {
        graph: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Intersection of two ideals (graded pairs, or matching summand shapes).
    Intersect {
        graph: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Build the realization graph of a finite poset.
    Realize {
        poset: PathBuf,
        /// Write the graph document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the order properties GLB, DC, DD, KAP of a poset.
    Props {
        poset: PathBuf,
        /// Exhaustive-subset bound (default 12).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Check that the poset's realization graph has the poset as spectrum.
    VerifyRealization {
        poset: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Von Neumann regularity report.
    Regular {
        graph: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run the equivalence suites over all small graphs.
    Sweep {
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
        #[arg(long, default_value = "0,1,2,inf")]
        mults: String,
        #[arg(long)]
        cap: Option<usize>,
    },
}

enum CliError {
    Core(CoreError),
    Io(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                CoreError::CapExceeded { .. } | CoreError::BoundExceeded { .. } => 4,
                CoreError::Unsupported(_)
                | CoreError::UnsupportedShape(_)
                | CoreError::UnsupportedFactorization { .. } => 1,
                _ => 3,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(payload) => {
            // A closed pipe (`lpa ... | head`) is a normal way to stop reading.
            use std::io::Write;
            let text = serde_json::to_string_pretty(&payload).unwrap();
            match writeln!(std::io::stdout(), "{text}") {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!(
                        "{}",
                        json!({ "error": { "code": 1, "message": e.to_string() } })
                    );
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            let code = e.exit_code();
            eprintln!(
                "{}",
                json!({ "error": { "code": code, "message": e.message() } })
            );
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn cap_or_default(cap: Option<usize>) -> usize {
    cap.or_else(|| std::env::var("LPA_CAP").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(DEFAULT_CAP)
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    Ok(Graph::from_json(&read(path)?)?)
}

fn load_ideal(
    g: &Graph,
    lat: &PairLattice,
    path: &Path,
) -> Result<(IdealRep, FieldSpec), CliError> {
    let doc = IdealDoc::from_json(&read(path)?)?;
    let field = match &doc.field {
        Some(fd) => fd.to_field()?,
        None => FieldSpec::Rationals,
    };
    let v = validate(g, lat, &doc)?;
    for w in &v.warnings {
        eprintln!("warning: {w}");
    }
    Ok((v.ideal, field))
}

fn dispatch(cmd: Cmd) -> Result<serde_json::Value, CliError> {
    match cmd {
        Cmd::Hss { graph, cap, dot } => {
            let g = load_graph(&graph)?;
            let sets = enumerate_hss(&g, cap_or_default(cap))?;
            if let Some(path) = dot {
                write(&path, &dot::hss_dot(&g, &sets))?;
            }
            let shown: Vec<Vec<String>> = sets.iter().map(|h| g.format_set(h.verts())).collect();
            Ok(json!({ "hss": shown }))
        }
        Cmd::Pairs { graph, cap, dot } => {
            let g = load_graph(&graph)?;
            let cap = cap_or_default(cap);
            let pairs = enumerate_admissible_pairs(&g, cap)?;
            if let Some(path) = dot {
                let lat = PairLattice::new(&g, cap)?;
                write(&path, &dot::pair_lattice_dot(&g, &lat))?;
            }
            let shown: Vec<serde_json::Value> = pairs.iter().map(|p| p.to_json_value(&g)).collect();
            Ok(json!({ "pairs": shown }))
        }
        Cmd::Quotient { graph, pair } => {
            let g = load_graph(&graph)?;
            let p = AdmissiblePair::from_json(&g, &read(&pair)?)?;
            match quotient(&g, &p) {
                Quotient::Empty => Ok(json!({ "empty": true })),
                Quotient::Graph(q) => {
                    let mut value = q.graph().to_json_value();
                    let primed: Vec<String> = q
                        .primed()
                        .iter()
                        .map(|&v| q.graph().name(v).to_owned())
                        .collect();
                    value["empty"] = json!(false);
                    value["primed"] = json!(primed);
                    Ok(value)
                }
            }
        }
        Cmd::Spec {
            graph,
            field,
            max_degree,
            cap,
            dot,
        } => {
            let g = load_graph(&graph)?;
            let lat = PairLattice::new(&g, cap_or_default(cap))?;
            let spec = compute_spec_with_lattice(&g, &lat)?;
            let mut nodes: Vec<serde_json::Value> =
                spec.nodes().iter().map(|n| n.to_json_value(&g)).collect();
            if let Some(field) = field {
                let field = parse_field_name(&field)?;
                let degree = max_degree.unwrap_or(1);
                for (i, polys) in spec.instantiate(field, degree)? {
                    nodes[i]["instances"] =
                        json!(polys.iter().map(|p| p.to_string()).collect::<Vec<_>>());
                }
            }
            if let Some(path) = dot {
                write(&path, &dot::spec_dot(&g, &spec))?;
            }
            let family_note = spec
                .covers()
                .iter()
                .any(|&(i, j)| spec.nodes()[i].is_family() || spec.nodes()[j].is_family())
                .then_some(
                    "covers touching a family node hold instance-wise, one instance at a \
                     time; distinct instances of one family are pairwise incomparable",
                );
            Ok(json!({
                "nodes": nodes,
                "leq": (0..spec.len())
                    .map(|i| (0..spec.len()).map(|j| spec.leq(i, j)).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "covers": spec.covers(),
                "incomparable_family_pairs": spec.family_incomparable_pairs(),
                "family_note": family_note,
            }))
        }
        Cmd::Semiprime { graph, ideal, cap } => {
            let g = load_graph(&graph)?;
            let lat = PairLattice::new(&g, cap_or_default(cap))?;
            let (i, _) = load_ideal(&g, &lat, &ideal)?;
            Ok(json!({ "semiprime": i.is_semiprime() }))
        }
        Cmd::Prime { graph, ideal, cap } => {
            let g = load_graph(&graph)?;
            let lat = PairLattice::new(&g, cap_or_default(cap))?;
            let (i, _) = load_ideal(&g, &lat, &ideal)?;
            match classify_prime(&g, &i)? {
                Classification::Prime(w) => {
                    let witness = match &w {
                        PrimeWitness::GradedDirected { pair } => json!({
                            "H": g.format_set(pair.h()),
                            "S": g.format_set(pair.s()),
                        }),
                        PrimeWitness::BreakingMinusOne { pair, u } => json!({
                            "H": g.format_set(pair.h()),
                            "S": g.format_set(pair.s()),
                            "u": g.name(*u),
                        }),
                        PrimeWitness::WkPoly { pair, cycle, u, f } => json!({
                            "H": g.format_set(pair.h()),
                            "S": g.format_set(pair.s()),
                            "cycle": cycle.verts().iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                            "u": g.name(*u),
                            "f": f.to_string(),
                        }),
                    };
                    Ok(json!({ "prime": true, "case": w.case(), "witness": witness }))
                }
                Classification::NotPrime(reason) => Ok(json!({
                    "prime": false,
                    "reason": reason.describe(&g),
                })),
            }
        }
        Cmd::Sum { graph, a, b, cap } => {
            let g = load_graph(&graph)?;
            let lat = PairLattice::new(&g, cap_or_default(cap))?;
            let (ia, fa) = load_ideal(&g, &lat, &a)?;
            let (ib, _) = load_ideal(&g, &lat, &b)?;
            let field = ia.field().or(ib.field()).unwrap_or(fa);
            Ok(sum(&g, &lat, &ia, &ib)?.to_json_value(&g, field))
        }
        Cmd::Intersect { graph, a, b, cap } => {
            let g = load_graph(&graph)?;
            let lat = PairLattice::new(&g, cap_or_default(cap))?;
            let (ia, fa) = load_ideal(&g, &lat, &a)?;
            let (ib, _) = load_ideal(&g, &lat, &b)?;
            let field = ia.field().or(ib.field()).unwrap_or(fa);
            Ok(intersect(&g, &lat, &ia, &ib)?.to_json_value(&g, field))
        }
        Cmd::Realize { poset, out } => {
            let p = FinPoset::from_json(&read(&poset)?)?;
            let g = realize(&p);
            let value = g.to_json_value();
            if let Some(path) = out {
                write(&path, &serde_json::to_string_pretty(&value).unwrap())?;
                Ok(json!({ "written": path.display().to_string() }))
            } else {
                Ok(value)
            }
        }
        Cmd::Props { poset, bound } => {
            let p = FinPoset::from_json(&read(&poset)?)?;
            let rep = check_properties_bounded(&p, bound.unwrap_or(DEFAULT_SUBSET_BOUND))?;
            let names = |s: &std::collections::BTreeSet<usize>| {
                s.iter()
                    .map(|&i| p.element(i).to_owned())
                    .collect::<Vec<_>>()
            };
            Ok(json!({
                "glb": rep.glb,
                "dc": rep.dc,
                "dd": rep.dd,
                "kap": rep.kap,
                "r_set": names(&r_set(&p)),
                "witnesses": {
                    "glb": rep.glb_witness.as_ref().map(names),
                    "dc": rep.dc_witness.as_ref().map(|(s, x)| json!({
                        "subset": names(s),
                        "element": p.element(*x),
                    })),
                    "dd": rep.dd_witness.as_ref().map(names),
                    "kap": rep.kap_witness.map(|(a, b)| json!([p.element(a), p.element(b)])),
                },
            }))
        }
        Cmd::VerifyRealization { poset, cap } => {
            let p = FinPoset::from_json(&read(&poset)?)?;
            let ok = verify_realization(&p, cap_or_default(cap))?;
            Ok(json!({ "realized": ok, "elements": p.len() }))
        }
        Cmd::Regular { graph, cap } => {
            let g = load_graph(&graph)?;
            let rep = regularity_report(&g, cap_or_default(cap))?;
            let witnesses: Vec<serde_json::Value> = rep
                .witnesses
                .iter()
                .map(|(pair, acyclic)| {
                    json!({
                        "H": g.format_set(pair.h()),
                        "S": g.format_set(pair.s()),
                        "acyclic": acyclic,
                    })
                })
                .collect();
            Ok(json!({ "regular": rep.regular, "witnesses": witnesses }))
        }
        Cmd::Sweep {
            max_vertices,
            mults,
            cap,
        } => {
            let menu = parse_mult_menu(&mults)?;
            let report = run_sweep(max_vertices, &menu, cap_or_default(cap))?;
            Ok(json!({
                "max_vertices": max_vertices,
                "mults": mults,
                "classes": report.classes,
                "condition_k_equivalence": {
                    "checked": report.classes,
                    "mismatches": report.condition_k_mismatches,
                },
                "regularity_equivalence": {
                    "checked": report.classes,
                    "mismatches": report.regularity_mismatches,
                },
                "kaplansky": {
                    "checked": report.classes,
                    "failures": report.kaplansky_failures,
                },
            }))
        }
    }
}
