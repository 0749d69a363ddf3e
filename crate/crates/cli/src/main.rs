//! `nframes`: file-driven computations and verification suites.
//!
//! Every command writes a report of JSON lines, one record per check, to
//! `--out` or standard output, and a summary line to standard error. The
//! exit status is 0 when every check passes, 1 on a failed check and 2 when
//! an input cannot be parsed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nframes::chain::HomologyView;
use nframes::dsub::DCat;
use nframes::exec::Exec;
use nframes::fincat::{
    closure_with, direct_structure, is_free, localize_bounded, validate_category, ClosureMode, FinCategory,
    MorphismClass,
};
use nframes::frames::{Frame, Frames};
use nframes::io::{
    graded_blocks, graded_from_blocks, parse_json, read_category, read_complex, read_diagram, read_lift, read_map,
    to_json, CategoryFile, ComplexFile, DiagramFile, SSetFile,
};
use nframes::linalg::{is_prime, MAX_PRIME};
use nframes::reedy::{colimits_agree, reedy_colimit, reedy_replace, reedy_status};
use nframes::sset::{homotopy_category, nerve, Builtin, TruncatedSSet};
use nframes::suites::{run_suite, theta_suite, verify_filtration, Report, SuiteConfig};
use nframes::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "nframes", version, about = "Exact computations with subdivisions, Reedy diagrams and frames")]
struct Cli {
    /// Truncation cap for nerves and subdivisions.
    #[arg(long, global = true, env = "NFRAMES_CAP", default_value_t = 3)]
    cap: usize,
    /// Prime for randomly generated complexes.
    #[arg(long, global = true, env = "NFRAMES_PRIME", default_value_t = 2, value_parser = parse_prime)]
    prime: u32,
    #[arg(long, global = true, env = "NFRAMES_SEED", default_value_t = 1)]
    seed: u64,
    /// Word-length budget for localizations and homotopy categories.
    #[arg(long, global = true, env = "NFRAMES_BUDGET", default_value_t = 6)]
    budget: usize,
    /// Report path; standard output when absent.
    #[arg(long, global = true, env = "NFRAMES_OUT")]
    out: Option<PathBuf>,
    /// Run independent cases one after another.
    #[arg(long, global = true, env = "NFRAMES_SEQUENTIAL")]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the category laws.
    Validate { category: PathBuf },
    /// Truncated nerve of a category.
    Nerve {
        category: PathBuf,
        /// Write the simplicial-set file here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Homotopy category of a simplicial set.
    Hocat {
        sset: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Bounded localization at the category's weak equivalences, or at the
    /// named morphisms.
    Localize {
        category: PathBuf,
        /// Comma-separated morphism names to invert.
        #[arg(long, value_delimiter = ',')]
        at: Vec<String>,
    },
    /// Thick subdivisions.
    Dsub {
        #[command(subcommand)]
        command: DsubCommand,
    },
    /// Closure of a morphism class under 2-out-of-3 or 2-out-of-6.
    WeqClosure {
        category: PathBuf,
        /// Seed morphisms by name; the file's weak equivalences when absent.
        /// Comma-separated morphism names to close.
        #[arg(long, value_delimiter = ',')]
        class: Vec<String>,
        #[arg(long, value_enum, default_value_t = Mode::TwoOfSix)]
        mode: Mode,
    },
    /// Reedy cofibrancy, colimits and replacement of diagram files.
    Reedy {
        #[command(subcommand)]
        command: ReedyCommand,
    },
    /// Frames and the comparison functor.
    Frames {
        #[command(subcommand)]
        command: FramesCommand,
    },
    /// Simplicial-set checks.
    Sset {
        #[command(subcommand)]
        command: SsetCommand,
    },
    /// A named verification suite.
    Suite {
        name: String,
        /// Built-in simplicial set for `nh-unit`.
        #[arg(long)]
        k: Option<String>,
        #[arg(long, env = "NFRAMES_CASES")]
        cases: Option<usize>,
        /// Corrupt composition tables in the property runner.
        #[arg(long)]
        inject: bool,
    },
}

#[derive(Subcommand, Debug)]
enum DsubCommand {
    /// `D` of a category or simplicial-set file.
    Build { input: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ReedyCommand {
    /// Latching-map cofibrancy at every object.
    Check { diagram: PathBuf },
    /// Colimit of a Reedy cofibrant diagram, with its cocone.
    Colim {
        diagram: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Reedy cofibrant replacement with a levelwise quasi-isomorphism back.
    Replace {
        diagram: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum FramesCommand {
    /// The vertex frame of a complex file.
    Vertex {
        complex: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// The edge frame of a chain-map file.
    Edge {
        map: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// The triangle frame of two composable chain maps.
    Triangle {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// θ of the edge of a chain map.
    Theta { map: PathBuf },
    /// Triangle coherence on seeded triangles.
    VerifyTriangles {
        #[arg(long, env = "NFRAMES_CASES")]
        cases: Option<usize>,
    },
    /// Lift a free diagram of derived-category morphisms to frame edges.
    Lift { input: PathBuf },
}

#[derive(Subcommand, Debug)]
enum SsetCommand {
    /// Rank filtration of `N(hK)` for a 1-skeletal `K`.
    VerifyFiltration {
        sset: Option<PathBuf>,
        /// Built-in set instead of a file.
        #[arg(long)]
        k: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    TwoOfThree,
    TwoOfSix,
}

impl Cli {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn suite_config(&self, cases: Option<usize>, inject: bool) -> SuiteConfig {
        SuiteConfig {
            seed: self.seed,
            cap: self.cap,
            prime: self.prime,
            budget: self.budget,
            cases,
            inject,
            exec: self.exec(),
        }
    }
}

fn parse_prime(s: &str) -> std::result::Result<u32, String> {
    let p: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if is_prime(p) && p <= MAX_PRIME {
        Ok(p)
    } else {
        Err(format!("expected a prime up to {MAX_PRIME}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let lines = report.to_json_lines();
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &lines).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{lines}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            eprintln!("{}", report.summary());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Error::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("FAIL: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(path: &Option<PathBuf>, text: String) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_sset(path: &Path) -> Result<TruncatedSSet> {
    nframes::io::read_sset(path)
}

fn valid_category(path: &Path) -> Result<FinCategory> {
    let c = read_category(path)?;
    let report = validate_category(&c);
    if let Some(v) = report.violations.first() {
        return Err(Error::Precondition(format!("{} is not a category: {v}", path.display())));
    }
    Ok(c)
}

fn names(c: &FinCategory, class: &MorphismClass) -> Vec<String> {
    class.iter().map(|m| c.name(m).to_string()).collect()
}

fn class_by_name(c: &FinCategory, names: &[String]) -> Result<MorphismClass> {
    let ids = names
        .iter()
        .map(|n| c.morphism_by_name(n).ok_or_else(|| Error::Parse(format!("no morphism named {n:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(MorphismClass::from_ids(c.num_morphisms(), ids))
}

fn builtin(name: &str) -> Result<Builtin> {
    Builtin::parse(name).map_err(|e| Error::Parse(e.to_string()))
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Validate { category } => validate(category),
        Command::Nerve { category, emit: out } => {
            let c = valid_category(category)?;
            let n = nerve(&c, cli.cap);
            emit(out, to_json(&SSetFile::from_sset(&n.sset)))?;
            let mut r = Report::new("nerve");
            r.push(
                "nerve",
                "simplicial-identities",
                n.sset.is_valid(),
                json!({ "cap": cli.cap, "counts": n.sset.counts() }),
            );
            Ok(r)
        }
        Command::Hocat { sset, emit: out } => {
            let k = read_sset(sset)?;
            let hk = homotopy_category(&k, cli.budget)?;
            emit(out, to_json(&CategoryFile::from_category(&hk.category)))?;
            let mut r = Report::new("hocat");
            let c = &hk.category;
            r.push(
                "hocat",
                "category-laws",
                validate_category(c).passed(),
                json!({ "objects": c.num_objects(), "morphisms": c.num_morphisms(), "budget": cli.budget }),
            );
            Ok(r)
        }
        Command::Localize { category, at } => {
            let c = valid_category(category)?;
            let w = if at.is_empty() { c.weq_or_isos() } else { class_by_name(&c, at)? };
            let loc = localize_bounded(&c, &w, cli.budget);
            let mut r = Report::new("localize");
            r.push(
                "localize",
                "stabilized",
                loc.is_stabilized(),
                json!({ "budget": cli.budget, "status": format!("{:?}", loc.status) }),
            );
            if loc.is_stabilized() {
                for e in loc.hom_report() {
                    r.push(
                        format!("hom/{}/{}", e.src, e.tgt),
                        "hom-set",
                        true,
                        json!({ "count": e.count, "representatives": e.representatives }),
                    );
                }
            }
            Ok(r)
        }
        Command::Dsub { command: DsubCommand::Build { input } } => dsub_build(cli, input),
        Command::WeqClosure { category, class, mode } => {
            let c = valid_category(category)?;
            let seed = if class.is_empty() { c.weq_or_isos() } else { class_by_name(&c, class)? };
            let mode = match mode {
                Mode::TwoOfThree => ClosureMode::TwoOfThree,
                Mode::TwoOfSix => ClosureMode::TwoOfSix,
            };
            let closed = closure_with(&c, &seed, mode, cli.exec());
            let idempotent = closure_with(&c, &closed, mode, cli.exec()) == closed;
            let mut r = Report::new("weq-closure");
            r.push(
                "closure",
                "closed-and-contains-seed",
                seed.is_subset(&closed) && idempotent,
                json!({ "mode": format!("{mode:?}"), "seed": names(&c, &seed), "closure": names(&c, &closed) }),
            );
            Ok(r)
        }
        Command::Reedy { command } => reedy(command),
        Command::Frames { command } => frames(cli, command),
        Command::Sset { command: SsetCommand::VerifyFiltration { sset, k } } => {
            let (name, k) = match (sset, k) {
                (Some(path), None) => (path.display().to_string(), read_sset(path)?),
                (None, Some(name)) => (name.clone(), builtin(name)?.build(cli.cap)),
                _ => return Err(Error::Parse("give either a simplicial-set file or --k".into())),
            };
            Ok(verify_filtration(&name, Arc::new(k), cli.budget))
        }
        Command::Suite { name, k, cases, inject } => {
            let k = k.as_deref().map(builtin).transpose()?;
            run_suite(name, &cli.suite_config(*cases, *inject), k)
        }
    }
}

fn validate(path: &Path) -> Result<Report> {
    let c = read_category(path)?;
    let report = validate_category(&c);
    let mut r = Report::new("validate");
    for (k, v) in report.violations.iter().enumerate() {
        r.push(format!("{k:04}"), "law", false, json!({ "violation": v.to_string() }));
    }
    if report.passed() {
        let direct = direct_structure(&c).ok().map(|d| d.degree);
        r.push(
            "category",
            "laws",
            true,
            json!({ "objects": c.num_objects(), "morphisms": c.num_morphisms(), "direct_degrees": direct, "free": is_free(&c).is_some() }),
        );
    }
    Ok(r)
}

fn dsub_build(cli: &Cli, input: &Path) -> Result<Report> {
    let text = read_text(input)?;
    let d = match parse_json::<CategoryFile>(&text) {
        Ok(file) => {
            let c = file.to_category()?;
            if let Some(v) = validate_category(&c).violations.first() {
                return Err(Error::Precondition(format!("not a category: {v}")));
            }
            DCat::of_category(Arc::new(c), cli.cap, cli.exec())?
        }
        Err(cat_err) => match parse_json::<SSetFile>(&text) {
            Ok(file) => DCat::of_sset(Arc::new(file.to_sset()?), cli.cap, cli.exec())?,
            Err(_) => return Err(cat_err),
        },
    };
    let c = d.category();
    let objects: Vec<_> = (0..d.num_objects())
        .map(|o| {
            let (dim, s) = d.object(o);
            json!({ "name": c.object_name(o), "dim": dim, "simplex": d.sset().name(dim, s), "degree": d.degree().degree[o] })
        })
        .collect();
    let mut r = Report::new("dsub");
    r.push(
        "dsub",
        "direct-category",
        validate_category(c).passed() && direct_structure(c).is_ok(),
        json!({
            "cap": d.cap(),
            "objects": objects,
            "morphisms": c.num_morphisms(),
            "weq": names(c, d.weq()),
        }),
    );
    Ok(r)
}

fn reedy(command: &ReedyCommand) -> Result<Report> {
    match command {
        ReedyCommand::Check { diagram } => {
            let x = read_diagram(diagram)?;
            let status = reedy_status(&x)?;
            let mut r = Report::new("reedy-check");
            for o in 0..x.index.num_objects() {
                let ok = !status.failures.contains(&o);
                r.push(
                    x.index.object_name(o),
                    "latching-map-cofibration",
                    ok,
                    json!({ "latching_dim": x.latching(o).object.total_dim() }),
                );
            }
            Ok(r)
        }
        ReedyCommand::Colim { diagram, emit: out } => {
            let x = read_diagram(diagram)?;
            let colim = reedy_colimit(&x)?;
            emit(out, to_json(&ComplexFile::from_complex(&colim.object)))?;
            let mut r = Report::new("reedy-colim");
            r.push(
                "colimit",
                "matches-coequalizer",
                colimits_agree(&x, &colim),
                json!({ "dims": colim.object.dims() }),
            );
            Ok(r)
        }
        ReedyCommand::Replace { diagram, emit: out } => {
            let x = read_diagram(diagram)?;
            let rep = reedy_replace(&x)?;
            emit(out, to_json(&DiagramFile::from_diagram(&rep.diagram)))?;
            let mut r = Report::new("reedy-replace");
            let status = reedy_status(&rep.diagram)?;
            r.push("replacement", "reedy-cofibrant", status.is_cofibrant(), json!({ "failures": status.failures }));
            r.push(
                "replacement",
                "levelwise-weq",
                rep.map.is_levelwise_weq(),
                json!({ "failures": rep.map.non_weq_objects() }),
            );
            let nh = rep.diagram.non_homotopical();
            r.push(
                "replacement",
                "homotopical",
                nh.is_empty() || !x.is_homotopical(),
                json!({ "non_homotopical": nh }),
            );
            Ok(r)
        }
    }
}

fn frame_record(r: &mut Report, fr: &Frames, case: &str, frame: &Frame) {
    let v = fr.validate(frame);
    r.push(
        case,
        "frame-valid",
        v.passed(),
        json!({ "level": frame.level, "reedy_failures": v.reedy_failures, "non_homotopical": v.non_homotopical, "other": v.other }),
    );
}

fn frames(cli: &Cli, command: &FramesCommand) -> Result<Report> {
    if let FramesCommand::VerifyTriangles { cases } = command {
        let mut r = theta_suite(&cli.suite_config(*cases, false));
        r.records.retain(|rec| rec.check == "triangle-coherence" || rec.check == "theta");
        return Ok(r.sorted());
    }
    let fr = Frames::new(cli.cap, cli.exec())?;
    let mut r = Report::new("frames");
    match command {
        FramesCommand::Vertex { complex, emit: out } => {
            let x = Arc::new(read_complex(complex)?);
            let v = fr.frame_of_object(x)?;
            emit(out, to_json(&DiagramFile::from_diagram(&v.diagram)))?;
            frame_record(&mut r, &fr, "vertex", &v);
        }
        FramesCommand::Edge { map, emit: out } => {
            let f = read_map(map)?;
            let (_, _, e) = fr.edge_of_map(&f)?;
            emit(out, to_json(&DiagramFile::from_diagram(&e.diagram)))?;
            frame_record(&mut r, &fr, "edge", &e);
            let detected = fr.is_equivalence_edge(&e);
            r.push(
                "edge",
                "equivalence-detection",
                detected == f.is_quasi_isomorphism(),
                json!({ "equivalence": detected, "quasi_iso": f.is_quasi_isomorphism() }),
            );
        }
        FramesCommand::Triangle { first, second, emit: out } => {
            let (f, g) = (read_map(first)?, read_map(second)?);
            if *f.target != *g.source {
                return Err(Error::Precondition("maps are not composable".into()));
            }
            let (_, v1, e01) = fr.edge_of_map(&f)?;
            let v2 = fr.frame_of_object(g.target.clone())?;
            let e12 = fr.frame_of_map(&g, &v1, &v2)?;
            let t = fr.triangle(&e01, &e12)?;
            emit(out, to_json(&DiagramFile::from_diagram(&t.diagram)))?;
            frame_record(&mut r, &fr, "triangle", &t);
            let chk = fr.check_triangle_coherence(&t)?;
            r.push(
                "triangle",
                "coherence",
                chk.passed(),
                json!({ "d0": graded_blocks(&chk.d0), "d1": graded_blocks(&chk.d1), "d2": graded_blocks(&chk.d2), "composite": graded_blocks(&chk.composite) }),
            );
        }
        FramesCommand::Theta { map } => {
            let f = read_map(map)?;
            let (_, _, e) = fr.edge_of_map(&f)?;
            let theta = fr.theta(&e)?;
            let expected = fr.conjugated_model_map(&e)?;
            r.push(
                "theta",
                "matches-induced-map",
                theta == expected,
                json!({ "source": theta.source(), "target": theta.target(), "blocks": graded_blocks(&theta) }),
            );
        }
        FramesCommand::Lift { input } => lift(&fr, input, &mut r)?,
        FramesCommand::VerifyTriangles { .. } => unreachable!("handled above"),
    }
    Ok(r)
}

fn lift(fr: &Frames, input: &Path, r: &mut Report) -> Result<()> {
    let (file, c) = read_lift(input)?;
    let quiver = is_free(&c).ok_or_else(|| Error::Precondition("lift shapes must be free categories".into()))?;
    if file.objects.len() != c.num_objects() {
        return Err(Error::Parse(format!("objects: expected {} complexes", c.num_objects())));
    }
    let complexes = file.objects.iter().map(|o| o.to_complex().map(Arc::new)).collect::<Result<Vec<_>>>()?;
    let mut arrows = Vec::new();
    for &m in &quiver.arrows {
        let entry = file
            .arrows
            .iter()
            .find(|e| e.morphism == m)
            .ok_or_else(|| Error::Parse(format!("arrows: no morphism for generator {}", c.name(m))))?;
        let (hs, ht) = (HomologyView::new(&complexes[c.src(m)]), HomologyView::new(&complexes[c.tgt(m)]));
        arrows.push(graded_from_blocks(complexes[0].prime(), hs.dims(), ht.dims(), &entry.blocks)?);
    }
    let vertices = complexes.iter().map(|x| fr.frame_of_object(x.clone())).collect::<Result<Vec<_>>>()?;
    let report = fr.lift_free_diagram(&c, &vertices, &arrows)?;
    for ((m, edge), theta) in report.generators.iter().zip(&report.edges).zip(&report.realized) {
        let valid = fr.validate(edge).passed();
        let equivalence = fr.is_equivalence_edge(edge);
        r.push(c.name(*m), "realized", valid, json!({ "theta": graded_blocks(theta), "equivalence": equivalence }));
    }
    Ok(())
}
