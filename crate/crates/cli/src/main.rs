use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::{RangedU64ValueParser, TypedValueParser};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gtwist_core::algebra::GroupElement;
use gtwist_core::comodule::{
    identity_degree_chart, twist_comodule_algebra, twist_comodule_rules,
    verify_invariant_correspondence, verify_weyl_correspondence, ComoduleAlgebra,
    EquivariantComoduleAlgebra,
};
use gtwist_core::format::{self, Source, TwistMode};
use gtwist_core::fusion::{
    chain_group, chain_pushforward_check, spectral_norm_estimate, twist_fusion,
    twisted_markov_check, FusionRing, FusionRules, Measure, Su2Rules, Values,
};
use gtwist_core::hopf::{
    check_hopf_axioms, graded_twist, HopfPresentation, InvariantCocentralAction,
};
use gtwist_core::matgroup::check_admissible;
use gtwist_core::CycScalar;

const GALLERY_ENV: &str = "GTWIST_GALLERY";
const EXTENSIONS: [&str; 5] = ["hopf", "tau", "grp", "fus", "coalg"];

/// Bounds and sizes must be at least 1.
fn positive() -> impl TypedValueParser<Value = usize> {
    RangedU64ValueParser::<u64>::new()
        .range(1..)
        .map(|v| v as usize)
}

#[derive(Parser)]
#[command(
    name = "gtwist",
    version,
    about = "Graded twisting of Hopf algebras, comodule algebras and fusion rules"
)]
struct Cli {
    /// Seed for randomized sweeps; recorded in every report header.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the graded twist of a Hopf presentation.
    TwistHopf {
        input: String,
        #[arg(long)]
        action: String,
    },
    /// Check the Hopf axioms on words up to the bound.
    CheckHopf {
        input: String,
        #[arg(long, default_value_t = 4, value_parser = positive())]
        word_bound: usize,
    },
    /// Check that the grading is strong and the rewriting system confluent.
    CheckGrading {
        input: String,
        #[arg(long, default_value_t = 4, value_parser = positive())]
        word_bound: usize,
    },
    /// Twist a comodule algebra file and compare identity-degree products.
    TwistComodule {
        input: String,
        #[arg(long, default_value_t = 4, value_parser = positive())]
        word_bound: usize,
    },
    /// Degreewise invariant dimensions of a twisted quantum plane.
    Invariants {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, default_value_t = 8, value_parser = positive())]
        max_degree: usize,
    },
    /// Full invariant-ring correspondence, with the Weyl variant when q = -1.
    VerifyCorrespondence {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, default_value_t = 12, value_parser = positive())]
        max_degree: usize,
    },
    /// Chain group of a fusion table.
    FusionChain { input: String },
    /// Markov operators, convolution and twisted Markov identities.
    FusionMarkov { input: String },
    /// Emit the twisted fusion table.
    FusionTwist { input: String },
    /// Spectral norm of a fusion matrix; `su2` selects the lazy SU(2) rules.
    FusionNorm {
        input: String,
        #[arg(long, default_value_t = 4000, value_parser = positive())]
        truncation: usize,
        /// Simple whose fusion matrix is estimated (default: `U1` or the first non-unit simple).
        #[arg(long)]
        object: Option<String>,
        /// Override the dimension of the object.
        #[arg(long)]
        declared_dim: Option<f64>,
    },
}

/// Input problems map to exit code 2, failed checks to 1.
enum Outcome {
    Input(String),
    Report(Report),
}

impl From<format::FormatError> for Outcome {
    fn from(e: format::FormatError) -> Self {
        Outcome::Input(e.to_string())
    }
}

macro_rules! input_err {
    ($($arg:tt)*) => { Outcome::Input(format!($($arg)*)) };
}

#[derive(Default)]
struct Report {
    body: String,
    failures: Vec<(String, String)>,
    /// The body is a data file; the verdict goes to standard error.
    emits_file: bool,
}

impl Report {
    fn line(&mut self, s: impl AsRef<str>) {
        self.body.push_str(s.as_ref());
        self.body.push('\n');
    }

    fn check(&mut self, name: &str, passed: bool, witness: impl FnOnce() -> String) {
        let status = if passed { "PASS" } else { "FAIL" };
        self.line(format!("{name:<56} {status}"));
        if !passed {
            self.failures.push((name.to_string(), witness()));
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn verdict(&self) -> String {
        let mut out = String::from("[verdict]\n");
        let _ = writeln!(
            out,
            "status = \"{}\"",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for (name, witness) in &self.failures {
            let _ = writeln!(
                out,
                "\n[[failure]]\ncheck = {:?}\nwitness = {:?}",
                name, witness
            );
        }
        out
    }
}

fn gallery_dir() -> PathBuf {
    std::env::var_os(GALLERY_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../gallery"))
}

/// Finds `name` as a path, then in the gallery with or without extension.
fn resolve(name: &str) -> Result<PathBuf, Outcome> {
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return Ok(direct);
    }
    let stem = name.strip_prefix("gallery/").unwrap_or(name);
    let dir = gallery_dir();
    let mut candidates = vec![dir.join(stem)];
    candidates.extend(EXTENSIONS.iter().map(|e| dir.join(format!("{stem}.{e}"))));
    candidates
        .into_iter()
        .find(|p| p.is_file())
        .ok_or_else(|| input_err!("cannot find `{name}` (gallery: {})", dir.display()))
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| input_err!("{}: {e}", path.display()))
}

fn load_hopf(name: &str) -> Result<(HopfPresentation, PathBuf), Outcome> {
    let path = resolve(name)?;
    let text = read(&path)?;
    let shown = path.display().to_string();
    Ok((format::parse_hopf(Source::new(&shown, &text))?, path))
}

fn load_action(hopf: HopfPresentation, name: &str) -> Result<InvariantCocentralAction, Outcome> {
    let path = resolve(name)?;
    let text = read(&path)?;
    let shown = path.display().to_string();
    let tau = format::parse_tau(Source::new(&shown, &text), hopf.base())?;
    InvariantCocentralAction::new(hopf, tau).map_err(|e| input_err!("{shown}: {e}"))
}

fn parse_q(q: &Option<String>, default: Option<CycScalar>) -> Result<CycScalar, Outcome> {
    match q {
        Some(s) => CycScalar::parse(s).map_err(|e| input_err!("--q: {e}")),
        None => Ok(default.unwrap_or_else(|| CycScalar::from_int(-1))),
    }
}

fn twist_hopf(input: &str, action: &str) -> Result<Report, Outcome> {
    let (h, _) = load_hopf(input)?;
    let x = load_action(h, action)?;
    let t = graded_twist(&x).map_err(|e| input_err!("{e}"))?;
    let mut r = Report {
        emits_file: true,
        ..Default::default()
    };
    r.body = format::write_hopf(&t);
    Ok(r)
}

fn check_hopf(input: &str, bound: usize) -> Result<Report, Outcome> {
    let (h, _) = load_hopf(input)?;
    let rep = check_hopf_axioms(&h, bound).map_err(|e| input_err!("{e}"))?;
    let mut r = Report::default();
    r.line(format!("word_bound = {bound}\n"));
    for c in &rep.checks {
        let name = format!("{} ({} cases)", c.name, c.checked);
        r.check(&name, c.passed, || c.witness.clone().unwrap_or_default());
    }
    Ok(r)
}

fn check_grading(input: &str, bound: usize) -> Result<Report, Outcome> {
    let (h, _) = load_hopf(input)?;
    let p = h.base();
    let mut r = Report::default();
    r.line(format!("group = \"{}\"\nword_bound = {bound}\n", p.group()));
    let conf = p.check_confluence(bound.max(2));
    r.check(
        &format!("confluent ({} overlaps)", conf.checked),
        conf.passed(),
        || {
            conf.failure
                .as_ref()
                .map(|f| format!("{} resolves to {} and {}", f.word, f.left, f.right))
                .unwrap_or_default()
        },
    );
    let sg = p
        .check_strong_grading(bound)
        .map_err(|e| input_err!("{e}"))?;
    let missing: Vec<String> = sg
        .missing_degrees
        .iter()
        .map(GroupElement::to_string)
        .collect();
    r.check("degrees generate the group", sg.surjective, || {
        format!("missing {}", missing.join(", "))
    });
    r.check(
        &format!("A_g A_h = A_(g+h) ({} pairs)", sg.checked),
        sg.failure.is_none(),
        || {
            sg.failure
                .as_ref()
                .map(|f| {
                    format!(
                        "g = {}, h = {}, length {}: span {} of {}",
                        f.g, f.h, f.length, f.found, f.expected
                    )
                })
                .unwrap_or_default()
        },
    );
    Ok(r)
}

fn twist_comodule(input: &str, bound: usize) -> Result<Report, Outcome> {
    let path = resolve(input)?;
    let text = read(&path)?;
    let shown = path.display().to_string();
    let src = Source::new(&shown, &text);
    let (hopf_rel, action_rel) = format::comodule_dependencies(src)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let (h, _) = load_hopf(&base.join(&hopf_rel).display().to_string())?;
    let x = load_action(h.clone(), &base.join(&action_rel).display().to_string())?;
    let spec = format::parse_comodule(src, &h)?;
    let err = |e: gtwist_core::comodule::ComoduleError| input_err!("{shown}: {e}");
    let mut r = Report::default();
    let th = graded_twist(&x).map_err(|e| input_err!("{e}"))?;
    // A malformed input is an input error; a twist that fails to be a
    // comodule algebra is a failed check.
    let twisted = match spec.mode {
        TwistMode::Strict => {
            r.line("mode = \"strict\"");
            let beta = gtwist_core::algebra::TauMaps::new(
                &spec.carrier,
                gtwist_core::algebra::TauKind::Action,
                spec.beta,
            )
            .map_err(|e| input_err!("{shown}: {e}"))?;
            let rc = EquivariantComoduleAlgebra::new(x.clone(), spec.carrier, spec.coaction, beta)
                .map_err(err)?;
            let chart = identity_degree_chart(&rc, bound).map_err(err)?;
            r.check(
                &format!("identity-degree products agree ({} pairs)", chart.checked),
                chart.passed(),
                || chart.mismatch.clone().unwrap_or_default(),
            );
            twist_comodule_algebra(&x, &rc)
                .map(|t| (t.carrier().clone(), t.comodule().coaction_table().to_vec()))
        }
        TwistMode::Rules => {
            r.line("mode = \"rules\"");
            let rc = ComoduleAlgebra::new(h.clone(), spec.carrier, spec.coaction).map_err(err)?;
            twist_comodule_rules(&x, &rc, spec.beta)
                .map(|t| (t.carrier().clone(), t.coaction_table().to_vec()))
        }
    };
    r.check("twist is a comodule algebra", twisted.is_ok(), || {
        twisted
            .as_ref()
            .err()
            .map(ToString::to_string)
            .unwrap_or_default()
    });
    let Ok((carrier, coaction)) = twisted else {
        return Ok(r);
    };
    r.line("\n[carrier]");
    let rules: Vec<String> = carrier
        .rules()
        .iter()
        .map(|ru| format!("{:?}", carrier.format_rule(ru)))
        .collect();
    r.line(format!("rewrite = [{}]", rules.join(", ")));
    r.line("\n[coaction]");
    for (g, t) in carrier.generators().iter().zip(&coaction) {
        r.line(format!(
            "{} = {:?}",
            g.name,
            format::format_tensor(t, th.base(), &carrier)
        ));
    }
    r.line("");
    Ok(r)
}

fn load_group(
    name: &str,
    q: &Option<String>,
) -> Result<(gtwist_core::matgroup::FiniteMatrixGroup, CycScalar), Outcome> {
    let path = resolve(name)?;
    let text = read(&path)?;
    let shown = path.display().to_string();
    let spec = format::parse_matrix_group(Source::new(&shown, &text))?;
    Ok((spec.group, parse_q(q, spec.q)?))
}

fn invariants(group: &str, q: &Option<String>, max: usize, full: bool) -> Result<Report, Outcome> {
    let (g, q) = load_group(group, q)?;
    let adm = check_admissible(&g, &q).map_err(|e| input_err!("{e}"))?;
    let mut r = Report::default();
    r.line(format!(
        "group_order = {}\nq = \"{q}\"\nmax_degree = {max}",
        g.order()
    ));
    r.line(format!(
        "twisted_commutative = {}\n",
        adm.twist_commutative(adm.q_order as usize)
    ));
    if !adm.admissible() {
        let why = match (&adm.missing_scalar, &adm.alpha_witness) {
            (Some(s), _) => format!("scalar {s} is missing"),
            (_, Some(w)) => format!("alpha moves {w} outside the group"),
            _ => String::new(),
        };
        r.check("group is admissible", false, || why);
        return Ok(r);
    }
    let rep = verify_invariant_correspondence(&g, &q, max).map_err(|e| input_err!("{e}"))?;
    if full {
        r.line("degree  molien  classical  twisted  untwisted  same_span  verdict");
    } else {
        r.line("degree  dim_classical  dim_twisted  verdict");
    }
    for row in &rep.rows {
        let v = if row.passed() { "PASS" } else { "FAIL" };
        if full {
            r.line(format!(
                "{:>6}  {:>6}  {:>9}  {:>7}  {:>9}  {:>9}  {v}",
                row.degree,
                row.molien.to_string(),
                row.classical,
                row.twisted,
                row.untwisted,
                row.same_span
            ));
        } else {
            r.line(format!(
                "{:>6}  {:>13}  {:>11}  {v}",
                row.degree, row.classical, row.twisted
            ));
        }
    }
    r.line(format!(
        "\ndegree_2_basis = [{}]",
        rep.degree_two_basis
            .iter()
            .map(|s| format!("{s:?}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    let bad = rep.first_failing_row().cloned();
    r.check("dimensions agree in every degree", bad.is_none(), || {
        let b = bad.unwrap();
        format!(
            "degree {}: classical {}, twisted {}, molien {}",
            b.degree, b.classical, b.twisted, b.molien
        )
    });
    if full {
        r.line(format!(
            "twisted_rules = [{}]",
            rep.twisted_rules
                .iter()
                .map(|s| format!("{s:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        r.check(
            &format!(
                "products of generators agree ({} pairs)",
                rep.products_checked
            ),
            rep.product_failure.is_none(),
            || rep.product_failure.clone().unwrap_or_default(),
        );
        if q == CycScalar::from_int(-1) {
            let weyl = verify_weyl_correspondence(&g, max.min(8)).map_err(|e| input_err!("{e}"))?;
            r.line("\n[weyl]");
            r.line(format!(
                "twisted_rules = [{}]",
                weyl.twisted_rules
                    .iter()
                    .map(|s| format!("{s:?}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            r.line("filtration  classical  twisted");
            for row in &weyl.rows {
                r.line(format!(
                    "{:>10}  {:>9}  {:>7}",
                    row.degree, row.classical, row.twisted
                ));
            }
            r.check("Weyl filtered dimensions agree", weyl.passed(), || {
                "see table".into()
            });
        }
    }
    Ok(r)
}

fn load_fusion(input: &str) -> Result<format::FusionSpec, Outcome> {
    let path = resolve(input)?;
    let text = read(&path)?;
    let shown = path.display().to_string();
    Ok(format::parse_fusion(Source::new(&shown, &text))?)
}

fn fusion_chain(input: &str) -> Result<Report, Outcome> {
    let spec = load_fusion(input)?;
    let f = &spec.ring;
    let ch = chain_group(f).map_err(|e| input_err!("{e}"))?;
    let mut r = Report::default();
    r.line(format!(
        "chain_group = \"{}\"\norder = {}\nabelian = {}\n",
        ch.describe(),
        ch.order(),
        ch.abelian
    ));
    r.line("[degree]");
    for (s, d) in ch.degree.iter().enumerate() {
        r.line(format!("{:?} = {d}", f.names()[s]));
    }
    r.line("");
    if let Some(x) = &spec.action {
        let ok = ch.factors(x.group(), x.degrees());
        r.check(
            "declared grading factors through the chain group",
            ok,
            || "a class carries two degrees".into(),
        );
    }
    let rs = f.row_stochastic();
    r.check("transition rows sum to 1", rs.is_ok(), || {
        rs.clone().unwrap_err()
    });
    Ok(r)
}

fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> Measure {
    let w: Vec<i64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                0
            } else {
                rng.gen_range(1..10)
            }
        })
        .collect();
    let total: i64 = w.iter().sum::<i64>().max(1);
    let mut weights: Vec<BigRational> = w
        .iter()
        .map(|&a| BigRational::new(a.into(), total.into()))
        .collect();
    if w.iter().all(|&a| a == 0) {
        weights[0] = BigRational::from_integer(1.into());
    }
    Measure::new(weights).expect("normalised")
}

fn random_function(rng: &mut ChaCha8Rng, n: usize) -> Vec<CycScalar> {
    (0..n)
        .map(|_| CycScalar::from_ratio(rng.gen_range(-20..=20), rng.gen_range(1..=6)))
        .collect()
}

fn fusion_markov(input: &str, seed: u64) -> Result<Report, Outcome> {
    let spec = load_fusion(input)?;
    let f = &spec.ring;
    let n = f.len();
    let names = f.names();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::default();
    r.line(format!("exact = {}\n", f.dims_values().is_exact()));
    r.line("[transition]");
    for s in 0..n {
        for rr in 0..n {
            for &(t, _) in f.product(s, rr) {
                let p = match f.transition_probability(s, rr, t) {
                    Values::Exact(v) => v[0].to_string(),
                    Values::Approx(v) => format!("{:.12}", v[0]),
                };
                r.line(format!(
                    "\"p_{}({}, {})\" = \"{p}\"",
                    names[s], names[rr], names[t]
                ));
            }
        }
    }
    r.line("");
    let rs = f.row_stochastic();
    r.check("transition rows sum to 1", rs.is_ok(), || {
        rs.clone().unwrap_err()
    });
    let mut fail = None;
    for i in 0..100 {
        let (nu, mu) = (random_measure(&mut rng, n), random_measure(&mut rng, n));
        let rep = chain_pushforward_check(f, &nu, &mu).map_err(|e| input_err!("{e}"))?;
        if !rep.passed() && fail.is_none() {
            fail = Some(format!("pair {i}: {:?} vs {:?}", rep.lhs, rep.rhs));
        }
    }
    r.check(
        "pushforward to the chain group (100 pairs)",
        fail.is_none(),
        || fail.clone().unwrap(),
    );
    let mut fail = None;
    for i in 0..20 {
        let (nu, mu) = (random_measure(&mut rng, n), random_measure(&mut rng, n));
        let g = Values::Exact(random_function(&mut rng, n));
        let lhs = f.markov_measure(&mu, &f.markov_measure(&nu, &g));
        let conv = f.convolve(&nu, &mu).map_err(|e| input_err!("{e}"))?;
        let rhs = f.markov_measure(&conv, &g);
        if !lhs.agrees(&rhs) && fail.is_none() {
            fail = Some(format!("sample {i}"));
        }
    }
    r.check(
        "P_mu P_nu = P_(nu * mu) (20 samples)",
        fail.is_none(),
        || fail.clone().unwrap(),
    );
    if let Some(x) = &spec.action {
        let mut fail = None;
        let mut literal = true;
        for s in 0..n {
            for _ in 0..50 {
                let g = random_function(&mut rng, n);
                let rep = twisted_markov_check(x, s, &g).map_err(|e| input_err!("{e}"))?;
                literal &= rep.literal_form_matches;
                if !rep.passed() && fail.is_none() {
                    fail = Some(format!(
                        "at {}: {:?} vs {:?}",
                        rep.simple, rep.twisted, rep.expected
                    ));
                }
            }
        }
        r.check(
            "twisted Markov identity (50 functions per simple)",
            fail.is_none(),
            || fail.clone().unwrap(),
        );
        r.line(format!("literal_form_matches = {literal}"));
    }
    Ok(r)
}

fn fusion_twist(input: &str) -> Result<Report, Outcome> {
    let spec = load_fusion(input)?;
    let x = spec
        .action
        .ok_or_else(|| input_err!("{input}: a [grading] section is needed to twist"))?;
    let t = twist_fusion(&x).map_err(|e| input_err!("{e}"))?;
    let ch = chain_group(&t).map_err(|e| input_err!("{e}"))?;
    let mut r = Report {
        emits_file: true,
        ..Default::default()
    };
    r.line(format!(
        "# chain group of the twisted rules: {}",
        ch.describe()
    ));
    r.body.push_str(&format::write_fusion(&t));
    Ok(r)
}

/// Rules with the dimension of one simple overridden.
struct Declared<'a> {
    rules: &'a dyn FusionRules,
    object: usize,
    dim: f64,
}

impl FusionRules for Declared<'_> {
    fn unit(&self) -> usize {
        self.rules.unit()
    }
    fn product(&self, s: usize, r: usize) -> Vec<(usize, u32)> {
        self.rules.product(s, r)
    }
    fn name(&self, s: usize) -> String {
        self.rules.name(s)
    }
    fn dual(&self, s: usize) -> usize {
        self.rules.dual(s)
    }
    fn dim(&self, s: usize) -> Option<f64> {
        if s == self.object {
            Some(self.dim)
        } else {
            self.rules.dim(s)
        }
    }
}

fn fusion_norm(
    input: &str,
    truncation: usize,
    object: &Option<String>,
    declared: Option<f64>,
    seed: u64,
) -> Result<Report, Outcome> {
    let ring: Option<FusionRing>;
    let su2 = Su2Rules::default();
    let (rules, x): (&dyn FusionRules, usize) = if input == "su2" {
        ring = None;
        let x = match object {
            Some(o) => o
                .strip_prefix('U')
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| input_err!("SU(2) simples are U0, U1, ..."))?,
            None => 1,
        };
        (&su2, x)
    } else {
        ring = Some(load_fusion(input)?.ring);
        let f = ring.as_ref().unwrap();
        let x = match object {
            Some(o) => f
                .index_of(o)
                .ok_or_else(|| input_err!("unknown simple `{o}`"))?,
            None => (0..f.len()).find(|&s| s != f.unit()).unwrap_or(f.unit()),
        };
        (f, x)
    };
    let wrapped;
    let rules: &dyn FusionRules = match declared {
        Some(dim) => {
            wrapped = Declared {
                rules,
                object: x,
                dim,
            };
            &wrapped
        }
        None => rules,
    };
    let tol = 1e-6;
    let rep = spectral_norm_estimate(rules, &[(x, 1)], truncation, tol, seed)
        .map_err(|e| input_err!("{e}"))?;
    let mut r = Report::default();
    r.line(format!(
        "object = {:?}\ntruncation = {truncation}\nball_size = {}\ntol = {tol:e}\n",
        rep.object, rep.ball_size
    ));
    r.line("ball  lower_bound");
    for (k, b) in &rep.lower_bounds {
        r.line(format!("{k:>4}  {b:.12}"));
    }
    r.line(format!(
        "\nestimate = {:.12}\nupper_bound = {:.12}\nclosed = {}\nconverged = {}",
        rep.estimate,
        rep.upper_bound,
        rep.closed,
        rep.converged()
    ));
    if let Some(d) = rep.declared_dim {
        r.line(format!("dimension = {d:.12}"));
        let gap = rep.dimension_gap().unwrap_or(0.0);
        r.check(
            "d(X) equals the norm of its fusion matrix",
            rep.amenable() == Some(true),
            || {
                if gap > 0.0 {
                    format!("not amenable: d(X) exceeds the norm bound by {gap:.6}")
                } else {
                    format!(
                        "inconclusive: bracket [{:.9}, {:.9}] around d(X) = {d}",
                        rep.estimate, rep.upper_bound
                    )
                }
            },
        );
    }
    if ring.is_some() {
        if let Some(f) = &ring {
            r.check(
                "dimension vector is a Perron-Frobenius eigenvector",
                f.dimension_eigen_check(&[(x, 1)]),
                || "eigen-equation fails".into(),
            );
        }
    }
    Ok(r)
}

fn header(cli: &Cli, name: &str) -> String {
    format!("# gtwist {name}\n# seed = {}\n", cli.seed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, outcome) = match &cli.command {
        Command::TwistHopf { input, action } => ("twist-hopf", twist_hopf(input, action)),
        Command::CheckHopf { input, word_bound } => ("check-hopf", check_hopf(input, *word_bound)),
        Command::CheckGrading { input, word_bound } => {
            ("check-grading", check_grading(input, *word_bound))
        }
        Command::TwistComodule { input, word_bound } => {
            ("twist-comodule", twist_comodule(input, *word_bound))
        }
        Command::Invariants {
            group,
            q,
            max_degree,
        } => ("invariants", invariants(group, q, *max_degree, false)),
        Command::VerifyCorrespondence {
            group,
            q,
            max_degree,
        } => (
            "verify-correspondence",
            invariants(group, q, *max_degree, true),
        ),
        Command::FusionChain { input } => ("fusion-chain", fusion_chain(input)),
        Command::FusionMarkov { input } => ("fusion-markov", fusion_markov(input, cli.seed)),
        Command::FusionTwist { input } => ("fusion-twist", fusion_twist(input)),
        Command::FusionNorm {
            input,
            truncation,
            object,
            declared_dim,
        } => (
            "fusion-norm",
            fusion_norm(input, *truncation, object, *declared_dim, cli.seed),
        ),
    };
    let report = match outcome.map(Outcome::Report).unwrap_or_else(|e| e) {
        Outcome::Input(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Outcome::Report(r) => r,
    };
    let mut text = header(&cli, name);
    text.push_str(&report.body);
    if !report.emits_file {
        if !text.ends_with("\n\n") {
            text.push('\n');
        }
        text.push_str(&report.verdict());
    } else if !report.passed() {
        eprint!("{}", report.verdict());
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
