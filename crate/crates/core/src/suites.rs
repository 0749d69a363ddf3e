//! Named verification suites and the seeded property-test runner.
//!
//! Every suite produces a [`Report`] of one record per check; records are
//! sorted by case id so identical configurations give identical output.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::chain::{factorize, pushout, ChainComplex, ChainMap, Degree, ExactFunctor, HomologyView};
use crate::dsub::{frame_embedding_i, DCat};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fincat::{
    closure_with, direct_structure, localize_bounded, search_essential_image, validate_category, ClosureMode,
    FinCategory, MorphismClass,
};
use crate::frames::{e_mix, mix_shape, pr_pullback, Frame, Frames};
use crate::gen::{
    case_rng, random_chain_map, random_complex, random_direct_category, random_map, random_quasi_iso,
    random_sequence_diagram, reedy_cofibrant_within, ComplexShape, Rng64,
};
use crate::reedy::{colimits_agree, pushforward_exact, reedy_colimit, reedy_status, DiagramColimit};
use crate::sset::{nerve, Builtin, NhK, TruncatedSSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Truncation cap for nerves and subdivisions.
    pub cap: usize,
    pub prime: u32,
    /// Word-length budget for localizations and homotopy categories.
    pub budget: usize,
    /// Case count for suites that take one; `None` uses the suite default.
    pub cases: Option<usize>,
    /// Corrupt composition tables in the property runner.
    pub inject: bool,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, cap: 3, prime: 2, budget: 6, cases: None, inject: false, exec: Exec::Parallel }
    }
}

impl SuiteConfig {
    fn cases_or(&self, default: usize) -> usize {
        self.cases.unwrap_or(default)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub suite: String,
    pub case: String,
    pub check: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report { suite: suite.to_string(), records: Vec::new() }
    }

    pub fn push(&mut self, case: impl Into<String>, check: &str, passed: bool, detail: Value) {
        self.records.push(Record {
            suite: self.suite.clone(),
            case: case.into(),
            check: check.to_string(),
            passed,
            detail,
        });
    }

    pub fn error(&mut self, case: impl Into<String>, check: &str, e: &Error) {
        self.push(case, check, false, json!({ "error": e.to_string() }));
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn sorted(mut self) -> Self {
        self.records.sort_by(|a, b| a.case.cmp(&b.case));
        self
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.records.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("{status} {} ({} checks, {failed} failed)", self.suite, self.records.len())
    }
}

fn case_id(k: usize) -> String {
    format!("{k:04}")
}

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 14] = [
    "not-strong",
    "nh-unit",
    "retraction",
    "weq-agreement",
    "reedy-colimit",
    "factorization",
    "replacement",
    "theta",
    "equivalence-edges",
    "e-left-inverse",
    "property",
    "mutation",
    "lift-contrast",
    "acceptance",
];

/// Runs a named suite. `k` selects the simplicial set for `nh-unit`; all
/// four built-in 1-skeletal test sets are used when it is `None`.
pub fn run_suite(name: &str, cfg: &SuiteConfig, k: Option<Builtin>) -> Result<Report> {
    let report = match name {
        "not-strong" => not_strong(cfg),
        "nh-unit" => match k {
            Some(k) => nh_unit(cfg, k),
            None => nh_unit_all(cfg),
        },
        "retraction" => retraction(cfg),
        "weq-agreement" => weq_agreement(cfg),
        "reedy-colimit" => reedy_colimit_oracle(cfg),
        "factorization" => factorization(cfg),
        "replacement" => relative_replacement(cfg),
        "theta" => theta_suite(cfg),
        "equivalence-edges" => equivalence_edges(cfg),
        "e-left-inverse" => e_left_inverse(cfg),
        "property" => run_property_tests(cfg),
        "mutation" => mutation_detection(cfg),
        "lift-contrast" => lift_contrast(cfg),
        "acceptance" => {
            let mut all = Report::new("acceptance");
            for part in acceptance_suites(cfg) {
                all.extend(part);
            }
            all
        }
        other => return Err(Error::Parse(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    };
    Ok(report.sorted())
}

/// The ten acceptance suites in order.
pub fn acceptance_suites(cfg: &SuiteConfig) -> Vec<Report> {
    vec![
        not_strong(cfg),
        nh_unit_all(cfg),
        retraction(cfg),
        weq_agreement(cfg),
        reedy_colimit_oracle(cfg),
        factorization(cfg),
        relative_replacement(cfg),
        theta_suite(cfg),
        equivalence_edges(cfg),
        e_left_inverse(cfg),
    ]
    .into_iter()
    .map(Report::sorted)
    .collect()
}

/// The zig-zag `A -> B <- C -> D` localized at `C -> B`: `Hom(A, D)` has one
/// element, and it is not the image of any arrow of `C` up to isomorphism.
pub fn not_strong(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("not-strong");
    let c = FinCategory::zigzag();
    let loc = localize_bounded(&c, c.weq().expect("the zig-zag carries weak equivalences"), cfg.budget);
    r.push(
        "zigzag",
        "stabilized",
        loc.is_stabilized(),
        json!({ "budget": cfg.budget, "status": format!("{:?}", loc.status) }),
    );
    let Some(ho) = loc.category.clone() else {
        return r;
    };
    let (a, d) = (c.object_by_name("A").unwrap(), c.object_by_name("D").unwrap());
    let hom = ho.hom(a, d);
    let entry = loc.hom_report().into_iter().find(|e| e.src == "A" && e.tgt == "D").expect("every pair is reported");
    r.push("zigzag", "hom-A-D", hom.len() == 1, json!({ "count": hom.len(), "witness": entry.representatives }));
    if let Some(&phi) = hom.first() {
        match search_essential_image(&c, &loc, phi) {
            Ok(s) => r.push(
                "zigzag",
                "not-in-essential-image",
                s.witness.is_none() && s.arrows_checked == c.num_morphisms(),
                json!({
                    "arrows_checked": s.arrows_checked,
                    "conjugations_checked": s.conjugations_checked,
                    "witness": s.witness.map(|(u, _, _)| c.name(u).to_string()),
                }),
            ),
            Err(e) => r.error("zigzag", "not-in-essential-image", &e),
        }
    }
    r
}

fn nh_unit_all(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("nh-unit");
    for k in [Builtin::Delta1, Builtin::Spine2, Builtin::Spine3, Builtin::Wedge] {
        r.extend(nh_unit(cfg, k));
    }
    r
}

/// Unique primitive factorizations, the pushout description of each stage
/// `K^(n)`, and exhaustion of `N(hK)` by the stages.
pub fn nh_unit(cfg: &SuiteConfig, k: Builtin) -> Report {
    verify_filtration(k.name(), Arc::new(k.build(cfg.cap)), cfg.budget)
}

/// [`nh_unit`] for an arbitrary 1-skeletal simplicial set.
pub fn verify_filtration(name: &str, k: Arc<TruncatedSSet>, budget: usize) -> Report {
    let mut r = Report::new("nh-unit");
    let nh = match NhK::new(k, budget) {
        Ok(nh) => nh,
        Err(e) => {
            r.error(name, "homotopy-category", &e);
            return r;
        }
    };
    let full = nh.sset();
    let mut bad = Vec::new();
    let mut checked = 0;
    for dim in 0..=nh.cap() {
        for s in 0..full.count(dim) {
            checked += 1;
            let all = nh.all_primitive_factorizations(dim, s);
            let ok = nh.primitive_factorization(dim, s).is_ok_and(|f| all == [f]);
            if !ok {
                bad.push(format!("{}:{}", dim, full.name(dim, s)));
            }
        }
    }
    r.push(name, "primitive-factorization", bad.is_empty(), json!({ "simplices": checked, "failures": bad }));
    for n in 1..=nh.cap() {
        match nh.verify_pushout(n) {
            Ok(chk) => r.push(
                format!("{name}/n={n}"),
                "pushout",
                chk.passed(),
                json!({
                    "primitives": chk.primitives,
                    "pushout_counts": chk.pushout_counts,
                    "stage_counts": chk.stage_counts,
                    "witness": chk.witness,
                }),
            ),
            Err(e) => r.error(format!("{name}/n={n}"), "pushout", &e),
        }
    }
    let (top, _) = nh.stage(nh.max_rank());
    r.push(
        name,
        "exhaustion",
        top.counts() == full.counts(),
        json!({ "max_rank": nh.max_rank(), "counts": full.counts() }),
    );
    r
}

/// `p ∘ i = id` on `[n]` and `i^* p^* = id` on random diagrams.
pub fn retraction(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("retraction");
    let cap = cfg.cap.max(3);
    let mut subdivisions = BTreeMap::new();
    for n in 0..=3 {
        let check = DCat::standard(n, cap, cfg.exec).and_then(|d| {
            let i = frame_embedding_i(&d)?;
            let pi = d.p_categorical()?.after(&i);
            let ok = pi.obj_map == (0..=n).collect::<Vec<_>>()
                && pi.mor_map == (0..pi.source.num_morphisms()).collect::<Vec<_>>();
            subdivisions.insert(n, (d, i));
            Ok(ok)
        });
        match check {
            Ok(ok) => r.push(format!("n={n}"), "p-after-i", ok, json!({ "n": n, "cap": cap })),
            Err(e) => r.error(format!("n={n}"), "p-after-i", &e),
        }
    }
    let cases = cfg.cases_or(20);
    for k in 0..cases {
        let mut rng = case_rng(cfg.seed, k as u64);
        let n = 1 + k % 2;
        let x = random_sequence_diagram(&mut rng, cfg.prime, n, ComplexShape::default());
        let Some((d, i)) = subdivisions.get(&n) else { continue };
        let round = d.p_categorical().and_then(|p| x.restrict(&p)).and_then(|y| y.restrict(i));
        match round {
            Ok(y) => r.push(case_id(k), "i-star-p-star", y == x, json!({ "n": n })),
            Err(e) => r.error(case_id(k), "i-star-p-star", &e),
        }
    }
    r
}

/// 2-out-of-6 closure of `p`-degenerate edges against the class of maps sent
/// to isomorphisms by `p`.
pub fn weq_agreement(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("weq-agreement");
    let inputs = [
        ("[1]", FinCategory::chain(1)),
        ("[2]", FinCategory::chain(2)),
        ("zigzag", FinCategory::zigzag().without_weq()),
    ];
    for (name, i) in inputs {
        let i = Arc::new(i);
        let result = DCat::of_category(i.clone(), cfg.cap, cfg.exec).and_then(|d| {
            let c = d.category();
            let m = c.num_morphisms();
            let seed = MorphismClass::from_ids(m, (0..m).filter(|&e| d.sset().is_degenerate(1, d.p_edge(e))));
            let closed = closure_with(c, &seed, ClosureMode::TwoOfSix, cfg.exec);
            let p = d.p_categorical()?;
            let by_iso = MorphismClass::from_ids(m, (0..m).filter(|&e| i.is_isomorphism(p.mor_map[e])));
            Ok((closed, by_iso, m))
        });
        match result {
            Ok((closed, by_iso, m)) => r.push(
                name,
                "closure-equals-p-iso",
                closed == by_iso,
                json!({ "morphisms": m, "closure": closed.len(), "p_iso": by_iso.len() }),
            ),
            Err(e) => r.error(name, "closure-equals-p-iso", &e),
        }
    }
    r
}

/// `reedy_colimit` against the coequalizer presentation, and commutation
/// with `- ⊗ F_p^2`.
pub fn reedy_colimit_oracle(cfg: &SuiteConfig) -> Report {
    let cases = cfg.cases_or(30);
    let records = cfg.exec.map_range(0..cases, |k| {
        let mut r = Report::new("reedy-colimit");
        let mut rng = case_rng(cfg.seed, k as u64);
        let c = Arc::new(random_direct_category(&mut rng, 5));
        let x = reedy_cofibrant_within(&mut rng, &c, cfg.prime, 12);
        let total: usize = x.objects.iter().map(|o| o.total_dim()).sum();
        let detail = json!({ "objects": c.num_objects(), "morphisms": c.num_morphisms(), "total_dim": total });
        match reedy_colimit(&x) {
            Ok(colim) => {
                r.push(case_id(k), "matches-coequalizer", colimits_agree(&x, &colim), detail.clone());
                let f = ExactFunctor::TensorVector(2);
                let pushed = pushforward_exact(f, &x);
                let image = DiagramColimit { object: Arc::new(f.on_complex(&colim.object)), cocone: Vec::new() };
                let cocone = colim
                    .cocone
                    .iter()
                    .zip(&pushed.objects)
                    .map(|(g, o)| f.on_map(g, o.clone(), image.object.clone()))
                    .collect();
                let image = DiagramColimit { cocone, ..image };
                r.push(case_id(k), "tensor-commutes", colimits_agree(&pushed, &image), detail);
            }
            Err(e) => r.error(case_id(k), "matches-coequalizer", &e),
        }
        r.records
    });
    let mut r = Report::new("reedy-colimit");
    r.records = records.into_iter().flatten().collect();
    r
}

/// Mapping-cylinder factorization into a cofibration and a quasi-isomorphism.
pub fn factorization(cfg: &SuiteConfig) -> Report {
    let cases = cfg.cases_or(100);
    let records = cfg.exec.map_range(0..cases, |k| {
        let mut rng = case_rng(cfg.seed, k as u64);
        let f = random_map(&mut rng, cfg.prime, ComplexShape { lo: -1, hi: 2, max_dim: 3 });
        let fac = factorize(&f);
        let composite = fac.weq.after(&fac.cofibration) == f;
        let cof = fac.cofibration.is_cofibration();
        let weq = fac.weq.is_quasi_isomorphism();
        Record {
            suite: "factorization".into(),
            case: case_id(k),
            check: "cofibration-then-weq".into(),
            passed: composite && cof && weq,
            detail: json!({ "composite": composite, "cofibration": cof, "quasi_iso": weq, "middle_dim": fac.object.total_dim() }),
        }
    });
    Report { suite: "factorization".into(), records }
}

fn small_shape() -> ComplexShape {
    ComplexShape { lo: 0, hi: 1, max_dim: 2 }
}

/// Relative replacement on `D[n]` for `n <= 2`, fixed over the endpoints.
pub fn relative_replacement(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("replacement");
    let fr = match Frames::new(cfg.cap, cfg.exec) {
        Ok(fr) => fr,
        Err(e) => {
            r.error("setup", "subdivisions", &e);
            return r;
        }
    };
    let cases = cfg.cases_or(15);
    let records = cfg.exec.map_range(0..cases, |k| {
        let mut out = Report::new("replacement");
        let mut rng = case_rng(cfg.seed, k as u64);
        let n = k % 3;
        let model = random_sequence_diagram(&mut rng, cfg.prime, n, small_shape());
        let id = case_id(k);
        let built = (|| -> Result<(Frame, Vec<(usize, Frame)>)> {
            let ends: Vec<usize> = if n == 0 { vec![] } else { vec![0, n] };
            let vertices = ends
                .iter()
                .map(|&a| fr.frame_of_object(model.objects[a].clone()).map(|v| (a, v)))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<(usize, &Frame)> = vertices.iter().map(|(a, v)| (*a, v)).collect();
            Ok((fr.over_vertices(model.clone(), &refs)?, vertices))
        })();
        let (frame, vertices) = match built {
            Ok(v) => v,
            Err(e) => {
                out.error(id, "replace", &e);
                return out.records;
            }
        };
        let restricted = vertices.iter().all(|(a, v)| {
            fr.reindex(&frame, &[*a]).is_ok_and(|w| w.diagram == v.diagram && w.weq.components == v.weq.components)
        });
        let report = fr.validate(&frame);
        let detail = json!({ "n": n, "sieve_vertices": vertices.iter().map(|(a, _)| a).collect::<Vec<_>>() });
        out.push(id.clone(), "restriction", restricted, detail.clone());
        out.push(id.clone(), "levelwise-weq", frame.weq.is_levelwise_weq(), detail.clone());
        out.push(
            id.clone(),
            "reedy-cofibrant",
            report.reedy_failures.is_empty(),
            json!({ "failures": report.reedy_failures }),
        );
        out.push(id, "homotopical", report.non_homotopical.is_empty(), json!({ "failures": report.non_homotopical }));
        out.records
    });
    r.records = records.into_iter().flatten().collect();
    r
}

fn random_small(rng: &mut Rng64, p: u32) -> Arc<ChainComplex> {
    Arc::new(random_complex(rng, p, small_shape()))
}

/// `θ` on degenerate edges, on triangles and on edges of maps.
pub fn theta_suite(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("theta");
    let fr = match Frames::new(cfg.cap, cfg.exec) {
        Ok(fr) => fr,
        Err(e) => {
            r.error("setup", "subdivisions", &e);
            return r;
        }
    };
    let p = cfg.prime;
    let cases = cfg.cases_or(20);
    let records = cfg.exec.map_range(0..cases, |k| {
        let mut out = Report::new("theta");
        let mut rng = case_rng(cfg.seed, k as u64);
        let id = case_id(k);
        let x = random_small(&mut rng, p);
        let y = random_small(&mut rng, p);
        let z = random_small(&mut rng, p);
        let f = random_chain_map(&mut rng, &x, &y);
        let g = random_chain_map(&mut rng, &y, &z);
        let mut run = || -> Result<()> {
            let (v0, v1, e01) = fr.edge_of_map(&f)?;
            let deg = fr.degenerate(&v0, 0)?;
            let t = fr.theta(&deg)?;
            out.push(id.clone(), "degenerate-is-identity", t.is_identity(), json!({ "homology": t.source() }));
            let theta = fr.theta(&e01)?;
            let expected = fr.conjugated_model_map(&e01)?;
            out.push(
                id.clone(),
                "edge-of-map",
                theta == expected,
                json!({ "source": theta.source(), "target": theta.target() }),
            );
            let v2 = fr.frame_of_object(z.clone())?;
            let e12 = fr.frame_of_map(&g, &v1, &v2)?;
            let tri = fr.triangle(&e01, &e12)?;
            let chk = fr.check_triangle_coherence(&tri)?;
            let valid = fr.validate(&tri).passed();
            out.push(id.clone(), "triangle-coherence", chk.passed() && valid, json!({ "valid_frame": valid }));
            Ok(())
        };
        if let Err(e) = run() {
            out.error(id, "theta", &e);
        }
        out.records
    });
    r.records = records.into_iter().flatten().collect();
    r
}

/// Edges of quasi-isomorphisms are equivalences, other edges are not, and
/// detection matches invertibility of `θ`.
pub fn equivalence_edges(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("equivalence-edges");
    let fr = match Frames::new(cfg.cap, cfg.exec) {
        Ok(fr) => fr,
        Err(e) => {
            r.error("setup", "subdivisions", &e);
            return r;
        }
    };
    let cases = cfg.cases_or(40);
    let records = cfg.exec.map_range(0..cases, |k| {
        let mut rng = case_rng(cfg.seed, k as u64);
        let f = if k % 2 == 0 {
            random_quasi_iso(&mut rng, cfg.prime, small_shape())
        } else {
            random_map(&mut rng, cfg.prime, small_shape())
        };
        let expected = f.is_quasi_isomorphism();
        let (passed, detail) =
            match fr.edge_of_map(&f).and_then(|(_, _, e)| Ok((fr.is_equivalence_edge(&e), fr.theta(&e)?))) {
                Ok((detected, theta)) => {
                    let invertible = theta.is_invertible();
                    (
                        detected == expected && invertible == detected,
                        json!({ "quasi_iso": expected, "detected": detected, "theta_invertible": invertible }),
                    )
                }
                Err(e) => (false, json!({ "error": e.to_string() })),
            };
        Record { suite: "equivalence-edges".into(), case: case_id(k), check: "detection".into(), passed, detail }
    });
    r.records = records;
    r
}

/// `e ∘ pr^* = id` on frames of every level.
pub fn e_left_inverse(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new("e-left-inverse");
    let fr = match Frames::new(cfg.cap, cfg.exec) {
        Ok(fr) => fr,
        Err(e) => {
            r.error("setup", "subdivisions", &e);
            return r;
        }
    };
    let p = cfg.prime;
    let cases = cfg.cases_or(10);
    let records = cfg.exec.map_range(0..cases, |k| {
        let mut rng = case_rng(cfg.seed, k as u64);
        let level = k % 3;
        let mut run = || -> Result<bool> {
            let x = random_small(&mut rng, p);
            let frame = match level {
                0 => fr.frame_of_object(x)?,
                _ => {
                    let y = random_small(&mut rng, p);
                    let f = random_chain_map(&mut rng, &x, &y);
                    let (_, v1, e01) = fr.edge_of_map(&f)?;
                    if level == 1 {
                        e01
                    } else {
                        let z = random_small(&mut rng, p);
                        let g = random_chain_map(&mut rng, &y, &z);
                        let v2 = fr.frame_of_object(z)?;
                        fr.triangle(&e01, &fr.frame_of_map(&g, &v1, &v2)?)?
                    }
                }
            };
            let shape = mix_shape(&fr.d[level], &fr.d[0])?;
            Ok(e_mix(&shape, &pr_pullback(&shape, &frame.diagram)?)? == *frame.diagram)
        };
        let (passed, detail) = match run() {
            Ok(ok) => (ok, json!({ "level": level })),
            Err(e) => (false, json!({ "level": level, "error": e.to_string() })),
        };
        Record { suite: "e-left-inverse".into(), case: case_id(k), check: "e-after-pr".into(), passed, detail }
    });
    r.records = records;
    r
}

/// The zig-zag `A -> B <- C -> D` of complexes with `C -> B` a
/// quasi-isomorphism defines `H(d) H(c)^-1 H(a)`. No arrow of the
/// localized index category lifts the corresponding composite, while the
/// derived-category morphism lifts to an edge of frames.
pub fn lift_contrast(cfg: &SuiteConfig) -> Report {
    let mut r = not_strong(cfg);
    r.suite = "lift-contrast".into();
    for rec in &mut r.records {
        rec.suite = r.suite.clone();
    }
    let fr = match Frames::new(cfg.cap, cfg.exec) {
        Ok(fr) => fr,
        Err(e) => {
            r.error("setup", "subdivisions", &e);
            return r;
        }
    };
    let p = cfg.prime;
    let cases = cfg.cases_or(5);
    for k in 0..cases {
        let mut rng = case_rng(cfg.seed, k as u64);
        let c = random_quasi_iso(&mut rng, p, small_shape());
        let a_obj = random_small(&mut rng, p);
        let d_obj = random_small(&mut rng, p);
        let a = random_chain_map(&mut rng, &a_obj, &c.target);
        let d = random_chain_map(&mut rng, &c.source, &d_obj);
        let run = || -> Result<bool> {
            let inv = c.induced().inverse().ok_or_else(|| Error::NotWeakEquivalence("C -> B".into()))?;
            let phi = d.induced().after(&inv).after(&a.induced());
            let shape = FinCategory::free(
                vec!["A".into(), "D".into()],
                vec![crate::fincat::Morphism { name: "phi".into(), src: 0, tgt: 1 }],
            )?;
            let vertices = [fr.frame_of_object(a_obj.clone())?, fr.frame_of_object(d_obj.clone())?];
            let lift = fr.lift_free_diagram(&shape, &vertices, std::slice::from_ref(&phi))?;
            Ok(lift.realized == [phi] && lift.edges.iter().all(|e| fr.validate(e).passed()))
        };
        match run() {
            Ok(ok) => r.push(format!("frames/{}", case_id(k)), "derived-morphism-lifts", ok, json!({ "shape": "[1]" })),
            Err(e) => r.error(format!("frames/{}", case_id(k)), "derived-morphism-lifts", &e),
        }
    }
    r
}

/// Size parameters for random property inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Size {
    pub degrees: usize,
    pub max_dim: usize,
    pub objects: usize,
}

impl Size {
    pub const DEFAULT: Size = Size { degrees: 3, max_dim: 3, objects: 5 };

    fn shape(self) -> ComplexShape {
        ComplexShape { lo: 0, hi: self.degrees as Degree - 1, max_dim: self.max_dim }
    }

    /// Strictly smaller sizes: degree range first, then dimensions, then
    /// object count.
    fn shrinks(self) -> Vec<Size> {
        let mut out = Vec::new();
        if self.degrees > 1 {
            out.push(Size { degrees: self.degrees - 1, ..self });
        }
        if self.max_dim > 0 {
            out.push(Size { max_dim: self.max_dim - 1, ..self });
        }
        if self.objects > 1 {
            out.push(Size { objects: self.objects - 1, ..self });
        }
        out
    }
}

/// Returns a summary of the generated input on success.
type Property = fn(&mut Rng64, Size, &SuiteConfig) -> std::result::Result<Value, String>;

fn euler(dims: &BTreeMap<Degree, usize>) -> i64 {
    dims.iter().map(|(&n, &d)| if n % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// Replaces one composite `g ∘ f` of non-identity morphisms by the identity
/// of the source of `f`, which has the wrong target.
pub fn mutate_composition(c: &FinCategory, rng: &mut Rng64) -> Option<(FinCategory, String)> {
    use rand::seq::SliceRandom;
    let mut pairs: Vec<_> = c.composable_pairs().filter(|&(g, f)| !c.is_identity(g) && !c.is_identity(f)).collect();
    pairs.sort_unstable();
    let &(g, f) = pairs.choose(rng)?;
    let mut table = c.table().clone();
    let wrong = c.identity(c.src(f));
    table.insert((g, f), wrong);
    let mutated = FinCategory::from_parts(c.objects().to_vec(), c.morphisms().to_vec(), c.identities().to_vec(), table);
    Some((mutated, format!("{} ∘ {} := {}", c.name(g), c.name(f), c.name(wrong))))
}

fn prop_category(rng: &mut Rng64, size: Size, cfg: &SuiteConfig) -> std::result::Result<Value, String> {
    let mut c = random_direct_category(rng, size.objects);
    let mut note = None;
    if cfg.inject {
        // Small shapes may have no composable pair to corrupt.
        for _ in 0..20 {
            if let Some((m, n)) = mutate_composition(&c, rng) {
                c = m;
                note = Some(n);
                break;
            }
            c = random_direct_category(rng, size.objects);
        }
    }
    let report = validate_category(&c);
    if !report.passed() {
        let laws: Vec<String> = report.violations.iter().take(3).map(|v| v.to_string()).collect();
        return Err(format!(
            "{} objects{}: {}",
            c.num_objects(),
            note.map(|n| format!(" after {n}")).unwrap_or_default(),
            laws.join("; ")
        ));
    }
    if direct_structure(&c).is_err() {
        return Err("generated category is not direct".into());
    }
    let nv = nerve(&c, 2);
    if !nv.sset.is_valid() {
        return Err(format!("nerve violates simplicial identities: {:?}", nv.sset.violations().first()));
    }
    Ok(json!({ "objects": c.num_objects(), "morphisms": c.num_morphisms(), "nerve": nv.sset.counts() }))
}

fn prop_homology(rng: &mut Rng64, size: Size, cfg: &SuiteConfig) -> std::result::Result<Value, String> {
    let x = random_complex(rng, cfg.prime, size.shape());
    let h = HomologyView::new(&x);
    if euler(x.dims()) != euler(h.dims()) {
        return Err(format!("Euler characteristics differ: chains {:?}, homology {:?}", x.dims(), h.dims()));
    }
    let summary = json!({ "dims": x.dims(), "homology": h.dims() });
    if !ChainMap::identity(Arc::new(x)).is_quasi_isomorphism() {
        return Err("identity is not a quasi-isomorphism".into());
    }
    Ok(summary)
}

fn prop_factorization(rng: &mut Rng64, size: Size, cfg: &SuiteConfig) -> std::result::Result<Value, String> {
    let f = random_map(rng, cfg.prime, size.shape());
    let fac = factorize(&f);
    fac.verify(&f).map_err(|e| e.to_string())?;
    if !fac.cofibration.is_cofibration() || !fac.weq.is_quasi_isomorphism() {
        return Err("factorization legs have the wrong type".into());
    }
    Ok(json!({ "source": f.source.dims(), "target": f.target.dims(), "middle": fac.object.dims() }))
}

fn prop_pushout(rng: &mut Rng64, size: Size, cfg: &SuiteConfig) -> std::result::Result<Value, String> {
    let i = random_quasi_iso(rng, cfg.prime, size.shape());
    let c = Arc::new(random_complex(rng, cfg.prime, size.shape()));
    let g = random_chain_map(rng, &i.source, &c);
    let sq = pushout(&i, &g).map_err(|e| e.to_string())?;
    if sq.from_b.after(&i) != sq.from_c.after(&g) {
        return Err("pushout square does not commute".into());
    }
    let chi = |x: &ChainComplex| euler(x.dims());
    if chi(&sq.object) != chi(&i.target) + chi(&c) - chi(&i.source) {
        return Err("pushout along a cofibration has the wrong size".into());
    }
    if !sq.from_c.is_quasi_isomorphism() {
        return Err("pushout of an acyclic cofibration is not a weak equivalence".into());
    }
    Ok(json!({ "pushout": sq.object.dims() }))
}

fn prop_colimit(rng: &mut Rng64, size: Size, cfg: &SuiteConfig) -> std::result::Result<Value, String> {
    let c = Arc::new(random_direct_category(rng, size.objects));
    let x = reedy_cofibrant_within(rng, &c, cfg.prime, size.max_dim * size.objects.max(1) + 1);
    if !reedy_status(&x).map_err(|e| e.to_string())?.is_cofibrant() {
        return Err("generated diagram is not Reedy cofibrant".into());
    }
    let colim = reedy_colimit(&x).map_err(|e| e.to_string())?;
    if !colimits_agree(&x, &colim) {
        return Err(format!("colimits disagree on {} objects", c.num_objects()));
    }
    Ok(json!({ "objects": c.num_objects(), "colimit": colim.object.dims() }))
}

fn prop_closure(rng: &mut Rng64, size: Size, cfg: &SuiteConfig) -> std::result::Result<Value, String> {
    use rand::Rng;
    let c = random_direct_category(rng, size.objects);
    let m = c.num_morphisms();
    let seed = MorphismClass::from_ids(m, (0..m).filter(|_| rng.gen_bool(0.3)));
    let cl = closure_with(&c, &seed, ClosureMode::TwoOfSix, cfg.exec);
    if !seed.is_subset(&cl) || closure_with(&c, &cl, ClosureMode::TwoOfSix, cfg.exec) != cl {
        return Err("closure is not an idempotent enlargement".into());
    }
    Ok(json!({ "morphisms": m, "seed": seed.len(), "closure": cl.len() }))
}

const PROPERTIES: [(&str, Property); 6] = [
    ("category-laws", prop_category),
    ("homology-euler", prop_homology),
    ("factorization", prop_factorization),
    ("pushout", prop_pushout),
    ("reedy-colimit", prop_colimit),
    ("two-of-six-closure", prop_closure),
];

/// Reruns `prop` on the same case stream at smaller sizes, keeping the
/// smallest size that still fails.
fn shrink(prop: Property, cfg: &SuiteConfig, case: u64, mut size: Size, mut message: String) -> (Size, String, usize) {
    let mut steps = 0;
    'outer: loop {
        for smaller in size.shrinks() {
            if let Err(m) = prop(&mut case_rng(cfg.seed, case), smaller, cfg) {
                size = smaller;
                message = m;
                steps += 1;
                continue 'outer;
            }
        }
        return (size, message, steps);
    }
}

/// Seeded invariant checks across modules; case `k` runs property
/// `k mod 6`. Failures are shrunk before being reported.
pub fn run_property_tests(cfg: &SuiteConfig) -> Report {
    let cases = cfg.cases_or(100);
    let records = cfg.exec.map_range(0..cases, |k| {
        let (name, prop) = PROPERTIES[k % PROPERTIES.len()];
        let size = Size::DEFAULT;
        let result = prop(&mut case_rng(cfg.seed, k as u64), size, cfg);
        let (passed, detail) = match result {
            Ok(input) => (true, json!({ "size": size, "input": input })),
            Err(message) => {
                let (min, message, steps) = shrink(prop, cfg, k as u64, size, message);
                (false, json!({ "size": size, "minimized": min, "shrink_steps": steps, "message": message }))
            }
        };
        Record { suite: "property".into(), case: case_id(k), check: name.into(), passed, detail }
    });
    Report { suite: "property".into(), records }
}

/// Corrupts one composite per case and expects `validate_category` to
/// reject the result.
pub fn mutation_detection(cfg: &SuiteConfig) -> Report {
    let cases = cfg.cases_or(20);
    let mut records = Vec::new();
    for k in 0..cases {
        let mut rng = case_rng(cfg.seed, k as u64);
        let mut attempt = 0;
        let (mutated, note) = loop {
            let c = random_direct_category(&mut rng, 5);
            if let Some(m) = mutate_composition(&c, &mut rng) {
                break m;
            }
            attempt += 1;
        };
        let report = validate_category(&mutated);
        records.push(Record {
            suite: "mutation".into(),
            case: case_id(k),
            check: "detected".into(),
            passed: !report.passed(),
            detail: json!({ "mutation": note, "violations": report.violations.len(), "regenerated": attempt }),
        });
    }
    Report { suite: "mutation".into(), records }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig { cap: 2, cases: Some(4), ..SuiteConfig::default() }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = quick();
        let a = run_suite("property", &cfg, None).unwrap();
        let b = run_suite("property", &SuiteConfig { exec: Exec::Sequential, ..cfg }, None).unwrap();
        assert!(a.passed(), "{}", a.to_json_lines());
        assert_eq!(a.to_json_lines(), b.to_json_lines());
    }

    #[test]
    fn injected_mutations_fail_and_shrink() {
        let cfg = SuiteConfig { inject: true, cases: Some(30), ..quick() };
        let r = run_property_tests(&cfg);
        let failed: Vec<&Record> = r.failures().collect();
        assert!(!failed.is_empty());
        assert!(failed.iter().all(|f| f.check == "category-laws"));
        for f in failed {
            assert!(f.detail["minimized"]["objects"].as_u64().unwrap() <= 5);
        }
        assert!(mutation_detection(&quick()).passed());
    }

    #[test]
    fn unknown_suite_is_a_parse_error() {
        assert!(matches!(run_suite("nope", &quick(), None), Err(Error::Parse(_))));
    }
}
