mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use qsequiv::atlas::{
    classify_presentation, component_report, content_hash, parse_a, poly_superpotential, Catalog, ClassifyConfig,
    FamilyOutcome, Item,
};
use qsequiv::ncgb::{complete, truncated_hilbert, GbConfig, MonomialOrder};
use qsequiv::presentation::{build_algebra, build_quantum_group, build_sl2_reduced, Variant};
use qsequiv::superpotential::{
    is_cy_shape, is_l_traceable, qdim_subspace, quantum_hilbert_series, AlgebraData, TwistedSuperpotential,
};
use qsequiv::tensor::{Matrix, Subspace};
use qsequiv::{Error, Field, FieldSpec, PrimeField, Rationals, Result};

#[derive(Parser, Debug)]
#[command(name = "qsequiv", version, about = "Twisted superpotentials and the vanishing of GL_m(e,f) / SL_m(e,f)")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Coefficient field: Q or Fp:<p>.
    #[arg(long, global = true, default_value = "Q")]
    field: FieldSpec,
    /// Degree bound for Gröbner completion.
    #[arg(long, global = true, default_value_t = qsequiv::ncgb::DEFAULT_BOUND)]
    bound: usize,
    /// `default`, `identity`, or a comma-separated precedence of generator names / positions.
    #[arg(long, global = true, default_value = "default")]
    order: String,
    /// Abort once the basis holds more than this many terms.
    #[arg(long, global = true, env = "QSEQUIV_BUDGET_TERMS")]
    budget_terms: Option<usize>,
    #[arg(long, global = true, env = "QSEQUIV_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Draw family parameters at random instead of the catalog defaults.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, conflicts_with = "gl")]
    sl: bool,
    #[arg(long, global = true)]
    gl: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Serialize, Debug, Clone)]
struct RunConfig {
    field: String,
    bound: usize,
    order: String,
    budget_terms: Option<usize>,
    cache_dir: Option<String>,
    seed: Option<u64>,
    variant: Variant,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        if self.bound < 2 {
            return Err(Error::Invalid("bound must be at least 2".into()));
        }
        if self.budget_terms == Some(0) {
            return Err(Error::Invalid("budget must be positive".into()));
        }
        Ok(RunConfig {
            field: self.field.to_string(),
            bound: self.bound,
            order: self.order.clone(),
            budget_terms: self.budget_terms,
            cache_dir: self.cache_dir.as_ref().map(|p| p.display().to_string()),
            seed: self.seed,
            variant: if self.sl { Variant::Sl } else { Variant::Gl },
        })
    }

    fn classify(&self) -> ClassifyConfig {
        ClassifyConfig {
            variant: if self.sl { Variant::Sl } else { Variant::Gl },
            bound: self.bound,
            order: self.order.clone(),
            max_basis_terms: self.budget_terms,
            cache_dir: self.cache_dir.clone(),
            ..ClassifyConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nondegeneracy, twist, CY shape and traceability of a tensor.
    Check {
        input: String,
        /// CY dimension for the shape test (defaults to the arity).
        #[arg(long)]
        d: Option<usize>,
    },
    /// Decide whether GL_m(e,f) (or SL_m with --sl) vanishes.
    Pair {
        e: String,
        f: String,
        /// For m = 2 with --sl: use the reduced presentation in the a-generators.
        #[arg(long)]
        reduced: bool,
        /// Write a Magma script beside the report.
        #[arg(long)]
        emit_magma: bool,
    },
    /// Pairwise classification of catalog families, with Table 1 comparison.
    Atlas {
        /// Catalog JSON (defaults to the builtin one).
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// `all`, `table`, or comma-separated family names.
        #[arg(long, default_value = "table")]
        select: String,
        /// `zero`, `generic`, `first`, `second` or four rationals.
        #[arg(long, default_value = "zero")]
        a: String,
        /// Leave the polynomial-ring superpotential out of the item list.
        #[arg(long)]
        no_poly: bool,
        /// Write report.json and report.txt into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Print the human-readable table to stderr.
        #[arg(long)]
        table: bool,
    },
    /// Quantum dimensions from the twist.
    Qdim {
        input: String,
        /// Tensor powers 0..=n.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Quantum Hilbert series next to the Gröbner normal-word count.
    Hilb {
        input: String,
        #[arg(long = "N", default_value_t = 2)]
        big_n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 5)]
        trunc: usize,
        #[arg(long, default_value_t = 1 << 20)]
        size_limit: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Degenerate { .. } => 2,
        Error::BudgetExceeded(_) => 4,
        Error::Io(_) | Error::InconsistentEvidence(_) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.run.field {
        FieldSpec::Rationals => dispatch(&Rationals, &cli),
        FieldSpec::Prime(p) => PrimeField::new(p).and_then(|f| dispatch(&f, &cli)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = exit_code(&e);
            let payload = json!({ "error": e.to_string(), "exit_code": code });
            println!("{}", serde_json::to_string_pretty(&payload).expect("json"));
            ExitCode::from(code)
        }
    }
}

fn dispatch<F: Field>(field: &F, cli: &Cli) -> Result<u8> {
    let cfg = cli.run.config()?;
    let catalog = Catalog::builtin();
    match &cli.command {
        Command::Check { input, d } => cmd_check(field, &cli.run, &cfg, &catalog, input, *d),
        Command::Pair { e, f, reduced, emit_magma } => {
            cmd_pair(field, &cli.run, &cfg, &catalog, e, f, *reduced, *emit_magma)
        }
        Command::Atlas { catalog: path, select, a, no_poly, out_dir, table } => {
            let catalog = match path {
                Some(p) => Catalog::parse(&std::fs::read_to_string(p)?)?,
                None => catalog,
            };
            cmd_atlas(field, &cli.run, &cfg, &catalog, select, a, *no_poly, out_dir.as_deref(), *table)
        }
        Command::Qdim { input, n } => cmd_qdim(field, &cli.run, &cfg, &catalog, input, *n),
        Command::Hilb { input, big_n, d, trunc, size_limit } => {
            cmd_hilb(field, &cli.run, &cfg, &catalog, input, *big_n, *d, *trunc, *size_limit)
        }
    }
}

fn emit(run: &RunArgs, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("json");
    match &run.out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn envelope(command: &str, cfg: &RunConfig, sources: &[&str], body: Value) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("config".into(), serde_json::to_value(cfg).expect("config json"));
    m.insert("input_hash".into(), json!(content_hash(sources)));
    m.insert("result".into(), body);
    Value::Object(m)
}

fn matrix_strings<F: Field>(m: &Matrix<F>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|c| m.field().format(c)).collect()).collect()
}

fn describe_matrix<F: Field>(m: &Matrix<F>) -> String {
    if m.is_identity() {
        return "I".into();
    }
    let f = m.field();
    let n = m.rows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || f.is_zero(m.get(i, j))));
    if diagonal {
        let d: Vec<String> = (0..n).map(|i| f.format(m.get(i, i))).collect();
        format!("diag({})", d.join(", "))
    } else {
        "non-diagonal".into()
    }
}

fn cmd_check<F: Field>(
    field: &F,
    run: &RunArgs,
    cfg: &RunConfig,
    catalog: &Catalog,
    input: &str,
    d: Option<usize>,
) -> Result<u8> {
    let loaded = input::load(field, input, catalog, run.seed)?;
    let t = &loaded.tensor;
    let mut body = Map::new();
    body.insert("m".into(), json!(t.arity()));
    body.insert("dim".into(), json!(t.dim()));
    let sp = match TwistedSuperpotential::new(t.clone()) {
        Ok(sp) => sp,
        Err(Error::Degenerate { rank, .. }) => {
            body.insert("nondeg".into(), json!(false));
            body.insert("rank".into(), json!(rank));
            emit(run, &envelope("check", cfg, &[&loaded.source], Value::Object(body)))?;
            return Ok(2);
        }
        Err(Error::NotTwisted) => {
            body.insert("nondeg".into(), json!(true));
            body.insert("twist".into(), Value::Null);
            emit(run, &envelope("check", cfg, &[&loaded.source], Value::Object(body)))?;
            return Ok(0);
        }
        Err(e) => return Err(e),
    };
    let d = d.unwrap_or(t.arity());
    body.insert("nondeg".into(), json!(true));
    body.insert("twist".into(), json!(describe_matrix(sp.twist())));
    body.insert("twist_matrix".into(), json!(matrix_strings(sp.twist())));
    body.insert("d".into(), json!(d));
    body.insert(format!("cy{d}"), json!(is_cy_shape(t, d)));
    for l in 2..=t.arity() {
        body.insert(format!("traceable{l}"), json!(is_l_traceable(&sp, l)?));
    }
    emit(run, &envelope("check", cfg, &[&loaded.source], Value::Object(body)))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_pair<F: Field>(
    field: &F,
    run: &RunArgs,
    cfg: &RunConfig,
    catalog: &Catalog,
    e: &str,
    f: &str,
    reduced: bool,
    emit_magma: bool,
) -> Result<u8> {
    let le = input::load(field, e, catalog, run.seed)?;
    let lf = input::load(field, f, catalog, run.seed)?;
    if le.tensor.arity() != lf.tensor.arity() {
        return Err(Error::ArityMismatch { left: le.tensor.arity(), right: lf.tensor.arity() });
    }
    let pres = if reduced {
        if !run.sl || le.tensor.arity() != 2 {
            return Err(Error::Invalid("--reduced needs --sl and arity 2".into()));
        }
        let (Some(me), Some(mf)) = (&le.matrix, &lf.matrix) else {
            return Err(Error::Invalid("--reduced needs matrix inputs".into()));
        };
        input::superpotential(&le)?;
        input::superpotential(&lf)?;
        build_sl2_reduced(me, mf)?
    } else {
        let se = input::superpotential(&le)?;
        let sf = input::superpotential(&lf)?;
        build_quantum_group(&se, &sf, cfg.variant)?
    };
    let result = classify_presentation(&le.label, &lf.label, &pres, &run.classify())?;
    let mut body = serde_json::to_value(&result).expect("pair json");
    if emit_magma {
        let path = match &run.out {
            Some(p) => p.with_extension("magma"),
            None => PathBuf::from("pair.magma"),
        };
        std::fs::write(&path, pres.to_magma(run.bound))?;
        body["magma"] = json!(path.display().to_string());
    }
    emit(run, &envelope("pair", cfg, &[&le.source, &lf.source], body))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_atlas<F: Field>(
    field: &F,
    run: &RunArgs,
    cfg: &RunConfig,
    catalog: &Catalog,
    select: &str,
    a_text: &str,
    no_poly: bool,
    out_dir: Option<&Path>,
    table: bool,
) -> Result<u8> {
    let names: Vec<String> = match select {
        "all" => catalog.families.iter().map(|f| f.name.clone()).collect(),
        "table" => catalog.families.iter().filter(|f| f.in_table).map(|f| f.name.clone()).collect(),
        list => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
    };
    let a = parse_a(field, a_text)?;
    let mut items = Vec::new();
    let mut degenerate = Vec::new();
    let mut sources = Vec::new();
    for name in &names {
        match input::family_outcome(field, catalog, name, &a, run.seed)? {
            FamilyOutcome::Nondegenerate(sp) => {
                sources
                    .push(serde_json::to_string(&qsequiv::tensor::TensorJson::from_tensor(sp.tensor())).expect("json"));
                let expected = catalog.family(name)?.expected.clone();
                items.push(Item { id: name.clone(), expected: Some(expected), superpotential: sp });
            }
            FamilyOutcome::Degenerate { rank, dim } => {
                degenerate.push(json!({ "family": name, "rank": rank, "dim": dim }))
            }
        }
    }
    if !no_poly {
        let sp = poly_superpotential(field)?;
        sources.push(serde_json::to_string(&qsequiv::tensor::TensorJson::from_tensor(sp.tensor())).expect("json"));
        items.push(Item { id: "f_poly".into(), expected: Some("ASreg3".into()), superpotential: sp });
    }
    let report = component_report(&items, &run.classify())?;
    let mut body = serde_json::to_value(&report).expect("report json");
    body["degenerate"] = Value::Array(degenerate);
    body["a"] = json!(a_text);
    let refs: Vec<&str> = sources.iter().map(String::as_str).collect();
    let value = envelope("atlas", cfg, &refs, body);
    let text_table = report.to_table();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&value).expect("json") + "\n")?;
        std::fs::write(dir.join("report.txt"), &text_table)?;
    } else {
        emit(run, &value)?;
    }
    if table {
        eprint!("{text_table}");
    }
    Ok(0)
}

fn cmd_qdim<F: Field>(
    field: &F,
    run: &RunArgs,
    cfg: &RunConfig,
    catalog: &Catalog,
    input: &str,
    n: usize,
) -> Result<u8> {
    let loaded = input::load(field, input, catalog, run.seed)?;
    let sp = input::superpotential(&loaded)?;
    let p = sp.twist();
    let p_inv = p.invert()?;
    let q = sp.dim();
    let mut body = Map::new();
    body.insert("twist".into(), json!(describe_matrix(p)));
    body.insert("trace_formula".into(), json!(field.format(&p_inv.trace())));
    let mut powers = Vec::new();
    for k in 0..=n {
        let ambient =
            qsequiv::tensor::checked_pow(q, k).ok_or(Error::SizeLimit { ambient: usize::MAX, limit: 1 << 20 })?;
        if ambient > 1 << 12 {
            return Err(Error::SizeLimit { ambient, limit: 1 << 12 });
        }
        powers.push(field.format(&qdim_subspace(&Subspace::full(field, ambient), p)?));
    }
    body.insert("qdim_tensor_powers".into(), json!(powers));
    if let Some(e) = &loaded.matrix {
        let t = e.invert()?.mul(&e.transpose())?.trace();
        body.insert("trace_e_inv_e_t".into(), json!(field.format(&t)));
    }
    emit(run, &envelope("qdim", cfg, &[&loaded.source], Value::Object(body)))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_hilb<F: Field>(
    field: &F,
    run: &RunArgs,
    cfg: &RunConfig,
    catalog: &Catalog,
    input: &str,
    big_n: usize,
    d: Option<usize>,
    trunc: usize,
    size_limit: usize,
) -> Result<u8> {
    let loaded = input::load(field, input, catalog, run.seed)?;
    let sp = input::superpotential(&loaded)?;
    let d = d.unwrap_or(sp.arity());
    let alg = AlgebraData::new(sp, big_n)?;
    let series = quantum_hilbert_series(&alg, d, trunc, size_limit)?;
    let pres = build_algebra(&alg)?;
    let order = MonomialOrder::resolve(&run.order, &pres)?;
    let gb = GbConfig { bound: trunc.max(big_n), max_steps: None, max_basis_terms: run.budget_terms };
    let state = complete(&pres, &gb, &order)?;
    let hilbert: Vec<String> = truncated_hilbert(&state, trunc)?.iter().map(u128::to_string).collect();
    let body = json!({
        "N": big_n,
        "d": d,
        "trunc": trunc,
        "quantum": series.to_json().coeffs,
        "hilbert": hilbert,
    });
    emit(run, &envelope("hilb", cfg, &[&loaded.source], body))?;
    Ok(0)
}
