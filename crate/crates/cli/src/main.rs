use clap::{Args, Parser, Subcommand, ValueEnum};
use dq_core::algebra::{composition_descends_check, pre_lie_check, quotient_space};
use dq_core::error::{AlgebraError, GraphError, WeightError};
use dq_core::graph::{enumerate_graphs, EnumerateOptions};
use dq_core::rational::q_to_string;
use dq_core::star::{
    associativity_residual, b_respects_relations, compare_products, gutt_star, star, HSeries, LieAlgebra, Polynomial,
};
use dq_core::weights::{
    multiplicativity_check, wheel_relation_check, zz_check, AngleMapKind, OneForm, SolverParams, WeightTable,
    WeightValue,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dq", version, about = "Graph weights and star products for linear Poisson structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List graph classes of a bidegree, optionally with the Jacobi quotient.
    Enumerate {
        #[command(flatten)]
        opts: Opts,
        /// Keep only graphs where every external vertex receives an edge.
        #[arg(long)]
        essential: bool,
        /// Keep classes that vanish by symmetry.
        #[arg(long)]
        include_vanishing: bool,
        /// Also report the quotient by Jacobi relations.
        #[arg(long)]
        quotient: bool,
    },
    /// Compute a weight table through order `--n`.
    Weights {
        #[command(flatten)]
        opts: Opts,
    },
    /// Star products of all monomial pairs up to `--degree`.
    StarTable {
        #[command(flatten)]
        opts: Opts,
    },
    /// Run one of the consistency checks.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[command(flatten)]
        opts: Opts,
        /// Number of random triples for `assoc`.
        #[arg(long, default_value_t = 50)]
        triples: usize,
        /// Forms for `wheel` (repeatable); non-uniform forms are folded.
        #[arg(long = "wheel-form")]
        wheel_forms: Vec<String>,
    },
    /// Compare the graph star product with the Gutt product.
    Compare {
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CheckKind {
    Assoc,
    Zz,
    Prelie,
    BRelations,
    Wheel,
    Multiplicativity,
    Descends,
}

#[derive(Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Method {
    Counted,
    Mc,
    Semicircle,
}

#[derive(Args, Clone, Serialize)]
struct Opts {
    /// Number of internal vertices, or the maximal order.
    #[arg(long)]
    n: Option<usize>,
    /// Number of external vertices.
    #[arg(long)]
    m: Option<usize>,
    /// Order in h for star products.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Semicircle)]
    method: Method,
    /// uniform | bump:c,w | semicircle[:c] | point:r1,r2,... | folded:<form>
    #[arg(long)]
    form: Option<String>,
    #[arg(long, default_value = "hyperbolic")]
    angle: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Largest accepted standard error for Monte-Carlo weights.
    #[arg(long)]
    tol: Option<f64>,
    /// sl2 | heisenberg | affine | abelian:d, or a JSON file of structure constants.
    #[arg(long, default_value = "sl2")]
    algebra: String,
    /// Maximal polynomial degree.
    #[arg(long)]
    degree: Option<u32>,
    /// Read weights from a table instead of computing them.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Other(String),
}

impl From<WeightError> for Failure {
    fn from(e: WeightError) -> Self {
        match e {
            WeightError::NonRegularValue(_) | WeightError::SolverBudget(_) | WeightError::SampleBudget { .. } => {
                Failure::Numerical(e.to_string())
            }
            WeightError::Graph(g) => g.into(),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::TooLarge { .. } => Failure::Usage(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Weight(w) => w.into(),
            AlgebraError::Graph(g) => g.into(),
            e => Failure::Usage(e.to_string()),
        }
    }
}

/// A finished run: JSON report, one-line summary, and whether it passed.
struct Outcome {
    report: Value,
    summary: String,
    pass: bool,
}

impl Opts {
    fn kind(&self) -> Result<AngleMapKind, Failure> {
        self.angle.parse().map_err(Failure::Usage)
    }

    fn form(&self) -> Result<Option<OneForm>, Failure> {
        self.form.as_deref().map(|f| f.parse::<OneForm>().map_err(Failure::Usage)).transpose()
    }

    fn algebra(&self) -> Result<LieAlgebra, Failure> {
        if let Some(g) = LieAlgebra::by_name(&self.algebra) {
            return Ok(g);
        }
        let text = std::fs::read_to_string(&self.algebra)
            .map_err(|e| Failure::Usage(format!("unknown algebra {:?}: {e}", self.algebra)))?;
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad algebra file: {e}")))
    }

    fn params(&self) -> SolverParams {
        SolverParams { seed: self.seed, ..SolverParams::default() }
    }

    /// Weight table through `order` from `--weights` or `--method`.
    fn table(&self, order: usize) -> Result<WeightTable, Failure> {
        if let Some(path) = &self.weights {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let t = WeightTable::from_json(&text)?;
            if t.n < order {
                return Err(Failure::Usage(format!("weight table has order {} but {order} is needed", t.n)));
            }
            return Ok(t);
        }
        let kind = self.kind()?;
        match self.method {
            Method::Semicircle => Ok(WeightTable::semicircle(order, kind, &self.params())?),
            Method::Counted => {
                let r = match self.form()? {
                    None => None,
                    Some(OneForm::Point { values }) => Some(values),
                    Some(f) => return Err(Failure::Usage(format!("counted weights need a point form, got {f}"))),
                };
                Ok(WeightTable::counted(order, r, kind, &self.params())?)
            }
            Method::Mc => {
                let form = self.form()?.unwrap_or(OneForm::Uniform);
                let t = WeightTable::mc(order, &form, kind, self.samples, self.seed)?;
                if let Some(tol) = self.tol {
                    for e in &t.entries {
                        if let WeightValue::Estimate { stderr, .. } = e.value {
                            if stderr > tol {
                                return Err(WeightError::SampleBudget { stderr, tol }.into());
                            }
                        }
                    }
                }
                Ok(t)
            }
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn enumerate(opts: &Opts, essential: bool, include_vanishing: bool, quotient: bool) -> Result<Outcome, Failure> {
    let n = opts.n.unwrap_or(2);
    let m = opts.m.unwrap_or(2);
    let eo = EnumerateOptions { essential_only: essential, include_vanishing, ..Default::default() };
    let classes = enumerate_graphs(n, m, eo)?;
    let list: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "class": c.key,
                "aut": c.aut,
                "vanishing": c.vanishing,
                "loop_number": c.loop_number,
                "labellings": c.representative.labellings_count().to_string(),
            })
        })
        .collect();
    let mut report = json!({ "n": n, "m": m, "classes": list });
    let mut summary = format!("{} classes in G_{{{n},{m}}}", classes.len());
    if quotient {
        let q = quotient_space(n, m)?;
        summary += &format!(", dim J = {}", q.dim());
        report["quotient"] = to_value(&q.export());
    }
    Ok(Outcome { report, summary, pass: true })
}

fn weights(opts: &Opts) -> Result<Outcome, Failure> {
    let n = opts.n.unwrap_or(2);
    let t = opts.table(n)?;
    let summary = format!("{} weights through order {n} ({})", t.entries.len(), t.form);
    Ok(Outcome { report: to_value(&t), summary, pass: true })
}

fn star_table(opts: &Opts) -> Result<Outcome, Failure> {
    let g = opts.algebra()?;
    let order = opts.order.unwrap_or(3);
    let t = opts.table(order)?;
    let basis = Polynomial::monomial_basis(g.dim(), opts.degree.unwrap_or(2));
    let mut products = Vec::new();
    for f in &basis {
        for h in &basis {
            products.push(json!({ "f": f, "g": h, "star": star(&t, &g, f, h, order)? }));
        }
    }
    let summary = format!("{} products through h^{order}", products.len());
    Ok(Outcome { report: json!({ "algebra": g, "order": order, "products": products }), summary, pass: true })
}

fn compare(opts: &Opts) -> Result<Outcome, Failure> {
    let g = opts.algebra()?;
    let order = opts.order.unwrap_or(3);
    let t = opts.table(order)?;
    let basis = Polynomial::monomial_basis(g.dim(), opts.degree.unwrap_or(3));
    let mut mismatches = Vec::new();
    for f in &basis {
        for h in &basis {
            let c = compare_products(&star(&t, &g, f, h, order)?, &gutt_star(&g, f, h, order)?);
            if !c.equal {
                mismatches.push(json!({ "f": f, "g": h, "first_difference": c.first_difference }));
            }
        }
    }
    let pairs = basis.len() * basis.len();
    let pass = mismatches.is_empty();
    let summary = format!("star vs Gutt through h^{order}: {} of {pairs} pairs differ", mismatches.len());
    Ok(Outcome { report: json!({ "pairs": pairs, "mismatches": mismatches, "pass": pass }), summary, pass })
}

fn check(opts: &Opts, which: CheckKind, triples: usize, wheel_forms: &[String]) -> Result<Outcome, Failure> {
    match which {
        CheckKind::Assoc => {
            let g = opts.algebra()?;
            let order = opts.order.unwrap_or(3);
            let degree = opts.degree.unwrap_or(3);
            let t = opts.table(order)?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut failures = Vec::new();
            for _ in 0..triples {
                let (a, b, c) = (
                    Polynomial::random(g.dim(), degree, &mut rng),
                    Polynomial::random(g.dim(), degree, &mut rng),
                    Polynomial::random(g.dim(), degree, &mut rng),
                );
                let r: HSeries = associativity_residual(&t, &g, &a, &b, &c, order)?;
                if !r.is_zero() {
                    failures.push(json!({ "f": a, "g": b, "h": c, "residual": r }));
                }
            }
            let pass = failures.is_empty();
            let summary = format!("associativity through h^{order}: {} of {triples} triples fail", failures.len());
            Ok(Outcome { report: json!({ "triples": triples, "failures": failures, "pass": pass }), summary, pass })
        }
        CheckKind::Zz => {
            let n = opts.n.unwrap_or(2);
            let t = opts.table(n)?;
            let reports = (0..=n).map(|k| zz_check(&t, k)).collect::<Result<Vec<_>, _>>()?;
            let pass = reports.iter().all(|r| r.zero);
            let summary = format!("Z∘Z in J_{{k,3}} for k ≤ {n}: {}", if pass { "zero" } else { "nonzero" });
            Ok(Outcome { report: json!({ "orders": reports, "pass": pass }), summary, pass })
        }
        CheckKind::Prelie => {
            let n = opts.n.unwrap_or(2);
            let r = pre_lie_check(n)?;
            let summary = format!("graded pre-Lie identity: {} triples, {} failures", r.cases, r.failures.len());
            Ok(Outcome { pass: r.pass, report: to_value(&r), summary })
        }
        CheckKind::Descends => {
            let n = opts.n.unwrap_or(2);
            let r = composition_descends_check(n)?;
            let summary = format!("composition on J: {} compositions, {} failures", r.cases, r.failures.len());
            Ok(Outcome { pass: r.pass, report: to_value(&r), summary })
        }
        CheckKind::BRelations => {
            let g = opts.algebra()?;
            let n = opts.n.unwrap_or(3);
            let pool = Polynomial::monomial_basis(g.dim(), opts.degree.unwrap_or(2));
            let mut checks = Vec::new();
            for k in 2..=n {
                for m in [2, 3] {
                    checks.push(b_respects_relations(&g, k, m, &pool)?);
                }
            }
            let pass = checks.iter().all(|c| c.pass);
            let rels: usize = checks.iter().map(|c| c.relations).sum();
            let summary = format!("B on {rels} Jacobi relations: {}", if pass { "all vanish" } else { "nonzero images" });
            Ok(Outcome { report: json!({ "checks": checks, "pass": pass }), summary, pass })
        }
        CheckKind::Wheel => {
            let forms = if wheel_forms.is_empty() {
                vec![OneForm::Uniform, "bump:0.3,0.1".parse().unwrap(), "bump:0.65,0.15".parse().unwrap()]
            } else {
                wheel_forms.iter().map(|f| f.parse::<OneForm>().map_err(Failure::Usage)).collect::<Result<_, _>>()?
            };
            let values = vec![vec![0.3, 0.55, 0.71, 0.13], vec![0.62, 0.17, 0.41, 0.88]];
            let r = wheel_relation_check(&forms, &values, opts.samples, opts.seed, &opts.params())?;
            let count = r.counts.first().map(|c| q_to_string(&c.combined)).unwrap_or_default();
            let summary = format!("wheel relation: count {count}, forms agree {}, pass {}", r.forms_agree, r.pass);
            Ok(Outcome { pass: r.pass, report: to_value(&r), summary })
        }
        CheckKind::Multiplicativity => {
            let n = opts.n.unwrap_or(3);
            let r = multiplicativity_check(n, opts.kind()?, &opts.params())?;
            let summary = format!("multiplicativity on {} products: {}", r.cases.len(), r.pass);
            Ok(Outcome { pass: r.pass, report: to_value(&r), summary })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match &cli.command {
        Command::Enumerate { opts, .. } => ("enumerate", opts),
        Command::Weights { opts } => ("weights", opts),
        Command::StarTable { opts } => ("star-table", opts),
        Command::Check { opts, .. } => ("check", opts),
        Command::Compare { opts } => ("compare", opts),
    };
    let result = opts.kind().and_then(|_| opts.form()).and_then(|_| match &cli.command {
        Command::Enumerate { opts, essential, include_vanishing, quotient } => {
            enumerate(opts, *essential, *include_vanishing, *quotient)
        }
        Command::Weights { opts } => weights(opts),
        Command::StarTable { opts } => star_table(opts),
        Command::Check { opts, which, triples, wheel_forms } => check(opts, *which, *triples, wheel_forms),
        Command::Compare { opts } => compare(opts),
    });
    let mut config = to_value(opts);
    config["command"] = json!(name);
    if let Command::Check { which, .. } = &cli.command {
        config["check"] = to_value(which);
    }
    match result {
        Ok(o) => {
            let mut report = o.report;
            if let Value::Object(map) = &mut report {
                map.insert("version".into(), json!(dq_core::VERSION));
                map.insert("config".into(), config);
            }
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &opts.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => println!("{text}"),
            }
            eprintln!("{}{}", o.summary, if o.pass { "" } else { " [FAIL]" });
            ExitCode::from(if o.pass { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
