//! Batch front end: schema ingestion, built-in catalog, verb dispatch,
//! deterministic JSON/text reports.
//!
//! Exit codes: 0 success; 1 internal assertion; 2 schema violation (the
//! message carries a JSON-pointer path); 3 precondition failure (the
//! message carries the precondition name). `ORBILOOP_THREADS` caps the
//! worker pool used by parallel computations.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use orbiloop_core::catalog;
use orbiloop_core::coc::{inner_local_system, transgress_bundle, transgress_gerbe, verify_holonomy};
use orbiloop_core::deloc::{delocalized, GammaComplex};
use orbiloop_core::grpcohom::{betti_q, cohomology_qmodz, cohomology_z, QmodZCohomology};
use orbiloop_core::loops::{inertia_loop_comparison, loop_groupoid, sectors};
use orbiloop_core::schema::{self, CochainDoc};
use orbiloop_core::selftest;
use orbiloop_core::simp::SimplicialComplex;
use orbiloop_core::zcomplex::TwistedComplex;
use orbiloop_core::{Error, FiniteGroup, FiniteGroupoid, QmodZ, Result};

#[derive(Parser)]
#[command(
    name = "orbiloop",
    version,
    about = "Exact computations on finite groupoid and orbifold models",
    after_help = "Built-in names are listed by `orbiloop selftest --format text`;\n\
                  input documents use the groupoid.v1 / group.v1 / cochain.v1 /\n\
                  cochain3.v1 / scomplex.v1 / gcomplex.v1 schemas."
)]
struct Cli {
    /// Report format: canonical JSON (byte-stable) or an aligned text table.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, ValueEnum)]
enum Coeff {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
    #[value(name = "QmodZ")]
    QmodZ,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Name of a built-in object from the catalog.
    #[arg(long)]
    builtin: Option<String>,
    /// Path to a JSON input document.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verb {
    /// Loop groupoid of a finite groupoid, with its sector decomposition.
    Loop {
        #[command(flatten)]
        src: Source,
    },
    /// Compare the equalizer (inertia) model against the loop groupoid.
    InertiaCheck {
        #[command(flatten)]
        src: Source,
    },
    /// Group cohomology tables with Z, Q, or Q/Z coefficients.
    Gcohom {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t = Coeff::Z)]
        coeff: Coeff,
        /// Largest degree reported.
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
    /// Transgress a cochain.v1 document to the loop groupoid of its base.
    Transgress {
        /// Path to a cochain.v1 document (the document names its own base).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Built-in 2-cocycle name (gerbe mode only).
        #[arg(long, conflicts_with = "input")]
        builtin: Option<String>,
        /// Treat the input as a degree-1 (bundle) cocycle.
        #[arg(long, conflicts_with = "gerbe")]
        bundle: bool,
        /// Treat the input as a degree-2 (gerbe) cocycle.
        #[arg(long)]
        gerbe: bool,
    },
    /// Check transgression = character = averaged carry over a cyclic base.
    HolonomyTheorem {
        /// Order of the cyclic base group.
        #[arg(long)]
        gamma: usize,
        /// Index of the character x -> k·x/gamma.
        #[arg(long)]
        phi: usize,
        /// Order of the cyclic fiber (must be a multiple of the twist order).
        #[arg(long = "N")]
        n: usize,
    },
    /// Delocalized (optionally twisted) cohomology of a group action.
    Deloc {
        #[command(flatten)]
        src: Source,
        /// Twist: a built-in 2-cocycle name or a path to a cochain.v1 file.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Cohomology of the twisted z-complex of a simplicial complex.
    Zcohom {
        #[command(flatten)]
        src: Source,
        /// Path to a cochain3.v1 document for the 3-cocycle twist.
        #[arg(long)]
        lambda: Option<PathBuf>,
        /// Use k times the fundamental twist of a 3-dimensional complex.
        #[arg(long, conflicts_with = "lambda")]
        twist: Option<i64>,
        /// Path to a flat Q/Z local system on edges.
        #[arg(long)]
        system: Option<PathBuf>,
        /// Largest total degree reported.
        #[arg(long)]
        mmax: Option<usize>,
        /// Also report the 2-periodic (even/odd) dimensions.
        #[arg(long)]
        periodic: bool,
    },
    /// Run every library invariant check.
    Selftest,
}

/// One verb's output in both formats, plus the first selftest failure
/// (reported after the full sweep has been printed).
struct Report {
    json: Value,
    text: String,
    failure: Option<Error>,
}

impl Report {
    fn new(json: Value, text: String) -> Report {
        Report { json, text, failure: None }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Schema { .. } => 2u8,
                Error::Precondition { .. } => 3u8,
                Error::Internal(_) => 1u8,
            })
        }
    }
}

fn init_threads() {
    if let Ok(raw) = std::env::var("ORBILOOP_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let report = dispatch(&cli.verb)?;
    match cli.format {
        Format::Json => print!("{}", schema::canonical_json(&report.json)),
        Format::Text => print!("{}", report.text),
    }
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn dispatch(verb: &Verb) -> Result<Report> {
    match verb {
        Verb::Loop { src } => loop_verb(src),
        Verb::InertiaCheck { src } => inertia_check_verb(src),
        Verb::Gcohom { src, coeff, nmax } => gcohom_verb(src, *coeff, *nmax),
        Verb::Transgress { input, builtin, bundle, gerbe } => {
            transgress_verb(input.as_deref(), builtin.as_deref(), *bundle, *gerbe)
        }
        Verb::HolonomyTheorem { gamma, phi, n } => holonomy_verb(*gamma, *phi, *n),
        Verb::Deloc { src, beta } => deloc_verb(src, beta.as_deref()),
        Verb::Zcohom { src, lambda, twist, system, mmax, periodic } => {
            zcohom_verb(src, lambda.as_deref(), *twist, system.as_deref(), *mmax, *periodic)
        }
        Verb::Selftest => selftest_verb(),
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

fn read_json(path: &Path) -> Result<Value> {
    let raw = std::fs::read_to_string(path).map_err(|e| {
        Error::precondition("input-file", format!("cannot read `{}`: {e}", path.display()))
    })?;
    serde_json::from_str(&raw)
        .map_err(|e| Error::schema("", format!("`{}` is not valid JSON: {e}", path.display())))
}

fn unknown(kind: &str, name: &str, available: Vec<String>) -> Error {
    Error::precondition(
        "builtin-name",
        format!("no built-in {kind} named `{name}`; available: {}", available.join(", ")),
    )
}

fn load_groupoid(src: &Source) -> Result<std::sync::Arc<FiniteGroupoid>> {
    match (&src.builtin, &src.input) {
        (Some(name), _) => {
            catalog::groupoid(name).ok_or_else(|| unknown("groupoid", name, catalog::groupoid_names()))
        }
        (_, Some(path)) => schema::parse_groupoid(&read_json(path)?),
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn load_group(src: &Source) -> Result<FiniteGroup> {
    match (&src.builtin, &src.input) {
        (Some(name), _) => {
            catalog::group(name).ok_or_else(|| unknown("group", name, catalog::group_names()))
        }
        (_, Some(path)) => schema::parse_group(&read_json(path)?),
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn load_gamma_complex(src: &Source) -> Result<GammaComplex> {
    match (&src.builtin, &src.input) {
        (Some(name), _) => catalog::gamma_complex(name)
            .ok_or_else(|| unknown("group action", name, catalog::gamma_complex_names())),
        (_, Some(path)) => schema::parse_gcomplex(&read_json(path)?, &catalog::group),
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn load_complex(src: &Source) -> Result<(String, SimplicialComplex)> {
    match (&src.builtin, &src.input) {
        (Some(name), _) => {
            let kx = catalog::complex(name)
                .ok_or_else(|| unknown("complex", name, catalog::complex_names()))?;
            Ok((name.clone(), kx))
        }
        (_, Some(path)) => {
            let kx = schema::parse_scomplex(&read_json(path)?)?;
            Ok((path.display().to_string(), kx))
        }
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn load_cochain(path: &Path) -> Result<CochainDoc> {
    schema::parse_cochain(&read_json(path)?, &catalog::group, &catalog::groupoid)
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

/// Renders rows as a left-aligned table with two-space gutters.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut width = vec![0usize; cols];
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            width[c] = width[c].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<w$}", w = width[c]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

fn loop_verb(src: &Source) -> Result<Report> {
    let base = load_groupoid(src)?;
    let lm = loop_groupoid(&base)?;
    let (comp, reps) = sectors(&lm);
    let mut size = vec![0usize; reps.len()];
    for &c in &comp {
        size[c] += 1;
    }
    let sector_docs: Vec<Value> = reps
        .iter()
        .enumerate()
        .map(|(s, &rep)| {
            let (x, g) = lm.obj_tags[rep];
            json!({
                "object": lm.base.objects[x],
                "loop": lm.base.morphisms[g].label,
                "centralizer_order": lm.gpd.aut(rep).len(),
                "component_size": size[s],
            })
        })
        .collect();
    let json = json!({
        "groupoid": schema::emit_groupoid(&lm.gpd),
        "meta": { "schema": schema::LOOP_META_V1, "sectors": sector_docs },
    });

    let mut rows = vec![vec![
        "sector".into(),
        "object".into(),
        "loop".into(),
        "centralizer".into(),
        "size".into(),
    ]];
    for (s, &rep) in reps.iter().enumerate() {
        let (x, g) = lm.obj_tags[rep];
        rows.push(vec![
            s.to_string(),
            lm.base.objects[x].clone(),
            lm.base.morphisms[g].label.clone(),
            lm.gpd.aut(rep).len().to_string(),
            size[s].to_string(),
        ]);
    }
    let text = format!(
        "{}: {} objects, {} morphisms, {} sectors\n{}",
        lm.gpd.name,
        lm.gpd.object_count(),
        lm.gpd.morphism_count(),
        reps.len(),
        aligned(&rows),
    );
    Ok(Report::new(json, text))
}

fn inertia_check_verb(src: &Source) -> Result<Report> {
    let base = load_groupoid(src)?;
    let (eq, lm, _, verdict) = inertia_loop_comparison(&base)?;
    let json = json!({
        "base": base.name,
        "equalizer": {
            "objects": eq.gpd.object_count(),
            "morphisms": eq.gpd.morphism_count(),
        },
        "loop": {
            "objects": lm.gpd.object_count(),
            "morphisms": lm.gpd.morphism_count(),
        },
        "equivalence": verdict.is_equivalence(),
        "detail": verdict.to_string(),
    });
    let text = format!(
        "base: {}\nequalizer model: {} objects, {} morphisms\nloop model: {} objects, {} morphisms\nequivalence: {}\n",
        base.name,
        eq.gpd.object_count(),
        eq.gpd.morphism_count(),
        lm.gpd.object_count(),
        lm.gpd.morphism_count(),
        verdict,
    );
    Ok(Report::new(json, text))
}

fn gcohom_verb(src: &Source, coeff: Coeff, nmax: usize) -> Result<Report> {
    let g = load_group(src)?;
    let coeff_name = match coeff {
        Coeff::Z => "Z",
        Coeff::Q => "Q",
        Coeff::QmodZ => "Q/Z",
    };
    let mut degrees = Vec::with_capacity(nmax + 1);
    let mut rows = vec![vec!["degree".to_string(), "cohomology".to_string()]];
    for k in 0..=nmax {
        let (doc, shown) = match coeff {
            Coeff::Z => {
                let h = cohomology_z(&g, k)?;
                (json!({"degree": k, "rank": h.rank, "torsion": h.torsion}), h.to_string())
            }
            Coeff::Q => {
                let r = betti_q(&g, k)?;
                let shown = match r {
                    0 => "0".to_string(),
                    1 => "Q".to_string(),
                    r => format!("Q^{r}"),
                };
                (json!({"degree": k, "rank": r}), shown)
            }
            Coeff::QmodZ => match cohomology_qmodz(&g, k)? {
                QmodZCohomology::Divisible => {
                    (json!({"degree": k, "divisible": true}), "Q/Z".to_string())
                }
                QmodZCohomology::Finite(h) => {
                    (json!({"degree": k, "rank": h.rank, "torsion": h.torsion}), h.to_string())
                }
            },
        };
        degrees.push(doc);
        rows.push(vec![format!("H^{k}"), shown]);
    }
    let json = json!({
        "group": g.name,
        "order": g.order(),
        "coefficients": coeff_name,
        "degrees": degrees,
    });
    let text = format!("H^*({}; {})\n{}", g.name, coeff_name, aligned(&rows));
    Ok(Report::new(json, text))
}

fn transgress_verb(
    input: Option<&Path>,
    builtin: Option<&str>,
    bundle: bool,
    gerbe: bool,
) -> Result<Report> {
    if bundle == gerbe {
        return Err(Error::precondition(
            "transgress-kind",
            "exactly one of --bundle / --gerbe is required",
        ));
    }
    if bundle {
        let Some(path) = input else {
            return Err(Error::precondition(
                "transgress-input",
                "--bundle requires --input (no built-in 1-cocycles exist)",
            ));
        };
        let doc = load_cochain(path)?;
        let base = doc.gpd.clone();
        let phi = doc.into_bundle()?;
        let lm = loop_groupoid(&base)?;
        let values = transgress_bundle(&lm, &phi)?;
        let entries: Vec<Value> = values
            .iter()
            .enumerate()
            .map(|(o, v)| json!({"object": lm.gpd.objects[o], "value": v.to_string()}))
            .collect();
        let json = json!({
            "kind": "bundle",
            "base": base.name,
            "entries": entries,
        });
        let mut rows = vec![vec!["object".to_string(), "holonomy".to_string()]];
        for (o, v) in values.iter().enumerate() {
            rows.push(vec![lm.gpd.objects[o].clone(), v.to_string()]);
        }
        let text = format!("bundle transgression over {}\n{}", base.name, aligned(&rows));
        return Ok(Report::new(json, text));
    }

    let (two, source) = match (builtin, input) {
        (Some(name), _) => {
            let g = catalog::twist(name)
                .ok_or_else(|| unknown("2-cocycle", name, catalog::twist_names()))?;
            (g, name.to_string())
        }
        (_, Some(path)) => {
            let doc = load_cochain(path)?;
            (doc.into_gerbe()?, path.display().to_string())
        }
        _ => {
            return Err(Error::precondition(
                "transgress-input",
                "--gerbe requires --input or --builtin",
            ))
        }
    };
    let base = two.gpd.clone();
    let normalized_input = two.is_normalized();
    let two = if normalized_input { two } else { two.gauge_normalize().0 };
    let lm = loop_groupoid(&base)?;
    let tau = transgress_gerbe(&lm, &two)?;
    let system = inner_local_system(&lm, &tau)?;

    let entries: Vec<Value> = tau
        .iter()
        .enumerate()
        .map(|(m, v)| json!({"morphism": lm.gpd.morphisms[m].label, "value": v.to_string()}))
        .collect();
    let sector_docs: Vec<Value> = system
        .iter()
        .map(|sc| {
            let (x, g) = lm.obj_tags[sc.rep];
            let values: Vec<Value> = sc
                .aut
                .iter()
                .zip(&sc.eps)
                .map(|(&m, v)| {
                    json!({"morphism": lm.gpd.morphisms[m].label, "value": v.to_string()})
                })
                .collect();
            json!({
                "object": lm.base.objects[x],
                "loop": lm.base.morphisms[g].label,
                "trivial": sc.is_trivial(),
                "values": values,
            })
        })
        .collect();
    let json = json!({
        "kind": "gerbe",
        "base": base.name,
        "source": source,
        "normalized_input": normalized_input,
        "entries": entries,
        "sectors": sector_docs,
    });

    let mut rows =
        vec![vec!["sector".to_string(), "loop".to_string(), "character".to_string()]];
    for sc in &system {
        let (x, g) = lm.obj_tags[sc.rep];
        let shown = if sc.is_trivial() {
            "trivial".to_string()
        } else {
            sc.eps.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        };
        rows.push(vec![
            lm.base.objects[x].clone(),
            lm.base.morphisms[g].label.clone(),
            shown,
        ]);
    }
    let text = format!(
        "gerbe transgression over {} ({} loop morphisms)\n{}",
        base.name,
        tau.len(),
        aligned(&rows),
    );
    Ok(Report::new(json, text))
}

fn holonomy_verb(gamma: usize, phi: usize, n: usize) -> Result<Report> {
    if gamma == 0 {
        return Err(Error::precondition("holonomy-base", "--gamma must be at least 1"));
    }
    let g = FiniteGroup::cyclic(gamma);
    let character: Vec<QmodZ> =
        (0..gamma).map(|x| QmodZ::new((phi as i64) * (x as i64), gamma as i64)).collect();
    let report = verify_holonomy(n, &g, &character)?;
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            json!({
                "element": e.element,
                "transgressed": e.transgressed.to_string(),
                "character": e.character.to_string(),
                "integrated": e.integrated.to_string(),
            })
        })
        .collect();
    let json = json!({
        "group": g.name,
        "character": phi,
        "fiber_order": report.fiber_order,
        "verdict": report.all_equal,
        "pipeline_checked": report.pipeline_checked,
        "entries": entries,
    });
    let mut rows = vec![vec![
        "element".to_string(),
        "transgressed".to_string(),
        "character".to_string(),
        "integrated".to_string(),
    ]];
    for e in &report.entries {
        rows.push(vec![
            e.element.clone(),
            e.transgressed.to_string(),
            e.character.to_string(),
            e.integrated.to_string(),
        ]);
    }
    let text = format!(
        "{}verdict: {} (pipeline {})\n",
        aligned(&rows),
        report.all_equal,
        if report.pipeline_checked { "checked" } else { "skipped at this size" },
    );
    Ok(Report::new(json, text))
}

fn deloc_verb(src: &Source, beta: Option<&str>) -> Result<Report> {
    let raw = load_gamma_complex(src)?;
    let twist = match beta {
        None => None,
        Some(name) => Some(match catalog::twist(name) {
            Some(g) => g,
            None => load_cochain(Path::new(name))?.into_gerbe()?,
        }),
    };
    // Fixed-point and quotient computations require a regular action, so the
    // complex is always passed through double barycentric subdivision first.
    let kx = raw.regularize()?;
    let report = delocalized(&kx, twist.as_ref())?;

    let sector_docs: Vec<Value> = report
        .sectors
        .iter()
        .map(|s| {
            json!({
                "class_rep": kx.group.label(s.class_rep),
                "class_size": s.class_size,
                "centralizer_order": s.centralizer_order,
                "fixed_counts": s.fixed_counts,
                "dims": s.dims,
            })
        })
        .collect();
    let json = json!({
        "complex": kx.name,
        "group": kx.group.name,
        "twisted": report.twisted,
        "total": report.total,
        "sectors": sector_docs,
    });

    let degrees = report.total.len();
    let mut header = vec!["sector".to_string(), "|[g]|".to_string(), "|C(g)|".to_string()];
    header.extend((0..degrees).map(|k| format!("H^{k}")));
    let mut rows = vec![header];
    for s in &report.sectors {
        let mut row = vec![
            kx.group.label(s.class_rep).to_string(),
            s.class_size.to_string(),
            s.centralizer_order.to_string(),
        ];
        row.extend(s.dims.iter().map(|d| d.to_string()));
        rows.push(row);
    }
    let mut total_row = vec!["total".to_string(), String::new(), String::new()];
    total_row.extend(report.total.iter().map(|d| d.to_string()));
    rows.push(total_row);
    let text = format!(
        "delocalized{} cohomology of {} (group {})\n{}",
        if report.twisted { " twisted" } else { "" },
        kx.name,
        kx.group.name,
        aligned(&rows),
    );
    Ok(Report::new(json, text))
}

fn zcohom_verb(
    src: &Source,
    lambda: Option<&Path>,
    twist: Option<i64>,
    system: Option<&Path>,
    mmax: Option<usize>,
    periodic: bool,
) -> Result<Report> {
    let (name, kx) = load_complex(src)?;
    let lam: Vec<BigRational> = match (lambda, twist) {
        (Some(path), _) => schema::parse_cochain3(&read_json(path)?, &kx)?,
        (None, Some(k)) => catalog::fundamental_twist(&kx, k)?,
        (None, None) => vec![BigRational::zero(); kx.size(3)],
    };
    let twisted = lam.iter().any(|v| !v.is_zero());
    let sys = match system {
        Some(path) => Some(schema::parse_local_system(&read_json(path)?, &kx)?),
        None => None,
    };
    let has_system = sys.is_some();
    let mut tc = TwistedComplex::new(kx, lam, sys)?;
    if let Some(m) = mmax {
        tc.m_max = m;
    }
    let dims = tc.twisted_cohomology()?;
    let pair = if periodic { Some(tc.periodic_cohomology()?) } else { None };

    let mut json = json!({
        "complex": name,
        "twisted": twisted,
        "system": has_system,
        "m_max": tc.m_max,
        "dims": dims,
    });
    if let Some((even, odd)) = pair {
        json["periodic"] = json!({"even": even, "odd": odd});
    }

    let mut rows = vec![vec!["m".to_string(), "dim".to_string()]];
    for (m, d) in dims.iter().enumerate() {
        rows.push(vec![m.to_string(), d.to_string()]);
    }
    let mut text = format!("z-complex cohomology of {name}\n{}", aligned(&rows));
    if let Some((even, odd)) = pair {
        text.push_str(&format!("periodic: even {even}, odd {odd}\n"));
    }
    Ok(Report::new(json, text))
}

fn selftest_verb() -> Result<Report> {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut passed = 0usize;
    let outcome = selftest::run_all(|name, result| match result {
        Ok(()) => {
            passed += 1;
            checks.push(json!({"name": name, "ok": true}));
            rows.push(vec!["ok".to_string(), name.to_string()]);
        }
        Err(e) => {
            checks.push(json!({"name": name, "ok": false, "error": e.to_string()}));
            rows.push(vec!["FAIL".to_string(), format!("{name}: {e}")]);
        }
    });
    let failed = checks.len() - passed;
    let json = json!({"checks": checks, "passed": passed, "failed": failed});
    let mut text = aligned(&rows);
    text.push_str(&format!("{passed} passed, {failed} failed\n"));
    Ok(Report { json, text, failure: outcome.err() })
}
