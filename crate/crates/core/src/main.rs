use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use nilcoh::catalog::{self, CatalogEntry, ComplexAttachment};
use nilcoh::coeff::{Field, GaussianRational, ParameterContext, Polynomial, Rational};
use nilcoh::cohomology::{
    build_complex, de_rham, morse_novikov, parametric_betti, CohomologyTable, ParametricTable,
    Theory,
};
use nilcoh::complex::{ComplexError, ComplexStructureInput};
use nilcoh::exterior::parse_element;
use nilcoh::groebner::{self, MonomialOrder, DEFAULT_PAIR_BUDGET};
use nilcoh::lcs::{apply_normalization, lcs_families, EquivalenceProblem, EquivalenceVerdict};
use nilcoh::lie::{parse_salamon_auto, StructureConstants};
use nilcoh::parametric::ConditionSet;

#[derive(Parser)]
#[command(
    name = "nilcoh",
    version,
    about = "Cohomology of Lie algebras and their complex and lcs structures"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Coefficient field for inputs; QQ rejects non-real coefficients.
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,
    /// Extra parameter names for expressions given on the command line.
    #[arg(long, global = true, value_delimiter = ',')]
    params: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    #[value(name = "QQ")]
    Qq,
    #[value(name = "QQi")]
    Qqi,
}

#[derive(Subcommand)]
enum Command {
    /// Browse the built-in algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check d² = 0.
    Jacobi {
        algebra: String,
    },
    /// De Rham cohomology dimensions.
    Betti {
        algebra: String,
    },
    /// Poincaré polynomial of one algebra, or of every catalog entry.
    Poincare {
        algebra: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Morse-Novikov cohomology of d − θ∧.
    Novikov {
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    Dolbeault(ComplexArgs),
    BottChern(ComplexArgs),
    Aeppli(ComplexArgs),
    /// Check that d vanishes in degree n − 1.
    Unimodular {
        algebra: String,
    },
    /// Locally conformally symplectic structures.
    Lcs {
        #[command(subcommand)]
        action: LcsAction,
    },
    /// Reduced Gröbner basis of an ideal file.
    Groebner {
        #[arg(long)]
        ideal: String,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Subcommand)]
enum LcsAction {
    /// Lee forms, lcs families and the recorded normalization.
    Classify { algebra: String },
    /// Decide equivalence of two members of the recorded normal form.
    Equivalence { algebra: String },
}

#[derive(clap::Args)]
struct ComplexArgs {
    /// Catalog name or JSON file; a catalog name also supplies the algebra.
    #[arg(long)]
    complex_structure: String,
    algebra: Option<String>,
}

enum CliError {
    Input(String),
    Compute(String),
}

type CliResult<T> = Result<T, CliError>;

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

fn compute(e: impl ToString) -> CliError {
    CliError::Compute(e.to_string())
}

struct Ctx {
    format: Format,
    field: Option<FieldArg>,
    params: Vec<String>,
}

impl Ctx {
    fn emit(&self, text: String, value: Value) {
        let body = match self.format {
            Format::Text => text,
            Format::Json => serde_json::to_string_pretty(&value).expect("serializable"),
        };
        let mut out = std::io::stdout().lock();
        writeln!(out, "{body}").and_then(|_| out.flush()).ok();
    }

    fn check_field(&self, s: &StructureConstants) -> CliResult<()> {
        if self.field == Some(FieldArg::Qq) && !s.has_params() && !s.is_rational() {
            return Err(input(
                "structure constants are not rational; use --field QQi",
            ));
        }
        Ok(())
    }

    fn expression_ctx(&self, base: &ParameterContext) -> CliResult<ParameterContext> {
        let mut ctx = base.clone();
        for p in &self.params {
            ctx.ensure(p).map_err(input)?;
        }
        Ok(ctx)
    }
}

fn read_json(path: &str) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{path}: {e}")))
}

fn catalog_entry(name: &str) -> CliResult<Option<&'static CatalogEntry>> {
    catalog::find(name).map_err(compute)
}

/// Catalog name or alias, then JSON file, then Salamon shorthand.
fn algebra_unchecked(arg: &str) -> CliResult<StructureConstants> {
    if let Some(e) = catalog_entry(arg)? {
        return Ok(e.structure.clone());
    }
    if Path::new(arg).is_file() {
        return StructureConstants::from_json(&read_json(arg)?)
            .map_err(|e| input(format!("{arg}: {e}")));
    }
    if arg.trim_start().starts_with('(') {
        return parse_salamon_auto(arg).map_err(|e| input(format!("{arg}: {e}")));
    }
    Err(input(format!(
        "unknown algebra '{arg}': not a catalog name, file or Salamon string"
    )))
}

fn algebra(ctx: &Ctx, arg: &str) -> CliResult<StructureConstants> {
    let s = algebra_unchecked(arg)?;
    s.ensure_jacobi()
        .map_err(|e| input(format!("{arg}: {e}")))?;
    ctx.check_field(&s)?;
    Ok(s)
}

fn totals_text(t: &CohomologyTable) -> String {
    let parts: Vec<String> = t.totals().iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn table_text(t: &CohomologyTable) -> String {
    let mut out = t.to_string();
    if let Some(bi) = &t.bigraded {
        out = format!("{}\ntotals {}", bi_text(bi), totals_text(t));
    }
    out
}

fn bi_text(bi: &std::collections::BTreeMap<(usize, usize), usize>) -> String {
    let parts: Vec<String> = bi
        .iter()
        .map(|((p, q), d)| format!("({p},{q}): {d}"))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn parametric_text(t: &ParametricTable, ctx: &ParameterContext) -> String {
    let lines: Vec<String> = t
        .strata
        .iter()
        .map(|(c, tab)| {
            let cond = if c.is_empty() {
                "always".to_string()
            } else {
                c.render(ctx)
            };
            format!("{cond}\n  {}", table_text(tab).replace('\n', "\n  "))
        })
        .collect();
    lines.join("\n")
}

fn run_catalog(ctx: &Ctx, action: CatalogAction) -> CliResult<()> {
    match action {
        CatalogAction::List => {
            let c = catalog::load_catalog().map_err(compute)?;
            let text: Vec<String> = c
                .iter()
                .map(|e| {
                    let aliases = if e.aliases.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", e.aliases.join(", "))
                    };
                    format!("{}{aliases}  dim {}", e.name, e.structure.dim())
                })
                .collect();
            let value: Vec<Value> = c
                .iter()
                .map(|e| json!({ "name": e.name, "aliases": e.aliases, "dim": e.structure.dim(), "nilpotent": e.nilpotent }))
                .collect();
            ctx.emit(text.join("\n"), Value::Array(value));
        }
        CatalogAction::Show { name } => {
            let e =
                catalog_entry(&name)?.ok_or_else(|| input(format!("unknown algebra '{name}'")))?;
            let mut value = e.structure.to_json();
            value["name"] = json!(e.name);
            let mut text = format!("{}\n{}", e.name, e.structure.render_images());
            if let Some(s) = e.structure.render_salamon() {
                text.push_str(&format!("\n{s}"));
            }
            for x in &e.expected {
                text.push_str(&format!("\n{}: {}  [{}]", x.theory, x.value, x.location));
            }
            for c in &e.complex {
                text.push_str(&format!("\ncomplex structure: {}", c.label));
            }
            ctx.emit(text, value);
        }
    }
    Ok(())
}

fn run_betti(ctx: &Ctx, arg: &str) -> CliResult<()> {
    let s = algebra(ctx, arg)?;
    if s.has_params() {
        let c = build_complex(&s.coboundary()).map_err(compute)?;
        let t = parametric_betti(&c, &ConditionSet::new()).map_err(compute)?;
        ctx.emit(parametric_text(&t, s.ctx()), t.to_json(s.ctx()));
        return Ok(());
    }
    let t = de_rham(&s).map_err(compute)?;
    ctx.emit(t.to_string(), t.to_json());
    Ok(())
}

fn run_poincare(ctx: &Ctx, arg: Option<String>, all: bool) -> CliResult<()> {
    if let Some(arg) = arg.filter(|_| !all) {
        let s = algebra(ctx, &arg)?;
        let t = de_rham(&s).map_err(compute)?;
        let p = t.render_poincare();
        ctx.emit(p.clone(), json!({ "name": arg, "poincare": p }));
        return Ok(());
    }
    if !all {
        return Err(input("give an algebra or --all"));
    }
    let entries = catalog::load_catalog().map_err(compute)?;
    let rows: Vec<(String, String)> = entries
        .par_iter()
        .filter(|e| !e.structure.has_params())
        .map(|e| de_rham(&e.structure).map(|t| (e.name.clone(), t.render_poincare())))
        .collect::<Result<_, _>>()
        .map_err(compute)?;
    let text: Vec<String> = rows.iter().map(|(n, p)| format!("{n}: {p}")).collect();
    let value: Vec<Value> = rows
        .iter()
        .map(|(n, p)| json!({ "name": n, "poincare": p }))
        .collect();
    ctx.emit(text.join("\n"), Value::Array(value));
    Ok(())
}

fn run_novikov(ctx: &Ctx, arg: &str, theta: &str) -> CliResult<()> {
    let s = algebra(ctx, arg)?;
    let pctx = ctx.expression_ctx(s.ctx())?;
    let th = parse_element(theta, s.dim(), &pctx).map_err(|e| input(format!("theta: {e}")))?;
    if th.pure_degree().is_some_and(|k| k != 1) {
        return Err(input("theta must be a 1-form"));
    }
    if !th.params().is_empty() {
        return Err(input("theta must have constant coefficients"));
    }
    let t = morse_novikov(&s, &th).map_err(compute)?;
    ctx.emit(t.to_string(), t.to_json());
    Ok(())
}

fn complex_inputs(
    ctx: &Ctx,
    args: &ComplexArgs,
) -> CliResult<(Option<StructureConstants>, Vec<ComplexAttachment>)> {
    if ctx.field == Some(FieldArg::Qq) {
        return Err(input("complex structures need --field QQi"));
    }
    if let Some(e) = catalog_entry(&args.complex_structure)? {
        if e.complex.is_empty() {
            return Err(input(format!(
                "catalog entry '{}' has no complex structure",
                e.name
            )));
        }
        return Ok((Some(e.structure.clone()), e.complex.clone()));
    }
    let v = read_json(&args.complex_structure)?;
    let s = args
        .algebra
        .as_deref()
        .map(|a| algebra(ctx, a))
        .transpose()?;
    let pctx = s.as_ref().map(|s| s.ctx().clone()).unwrap_or_default();
    let parsed = ComplexStructureInput::from_json(&v, &ctx.expression_ctx(&pctx)?)
        .map_err(|e| input(format!("{}: {e}", args.complex_structure)))?;
    if matches!(parsed, ComplexStructureInput::Real { .. }) && s.is_none() {
        return Err(input(
            "a real complex structure J needs an algebra argument",
        ));
    }
    let label = v
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or(&args.complex_structure)
        .to_string();
    Ok((
        s,
        vec![ComplexAttachment {
            label,
            input: parsed,
            base: ConditionSet::new(),
        }],
    ))
}

fn complex_error(e: ComplexError) -> CliError {
    match e {
        ComplexError::Cohomology(_) | ComplexError::Coeff(_) => compute(e),
        _ => input(e),
    }
}

fn run_bigraded(ctx: &Ctx, args: &ComplexArgs, theory: Theory) -> CliResult<()> {
    let (alg, attachments) = complex_inputs(ctx, args)?;
    let mut texts = Vec::new();
    let mut values = Vec::new();
    for a in &attachments {
        let b = match (&a.input, &alg) {
            (ComplexStructureInput::Direct(b), None) => b.clone(),
            (i, Some(s)) => i.resolve(s).map_err(complex_error)?,
            (ComplexStructureInput::Real { .. }, None) => {
                unreachable!("rejected while reading inputs")
            }
        };
        b.integrability_check().map_err(complex_error)?;
        if b.has_params() {
            let t = b.parametric_cohomology(theory, &a.base).map_err(compute)?;
            texts.push(format!("{}\n{}", a.label, parametric_text(&t, b.ctx())));
            values.push(json!({ "label": a.label, "strata": t.to_json(b.ctx()) }));
        } else {
            let t = b.cohomology(theory).map_err(compute)?;
            texts.push(format!("{}\n{}", a.label, table_text(&t)));
            values.push(json!({ "label": a.label, "table": t.to_json() }));
        }
    }
    ctx.emit(texts.join("\n"), Value::Array(values));
    Ok(())
}

fn run_unimodular(ctx: &Ctx, arg: &str) -> CliResult<()> {
    let s = algebra(ctx, arg)?;
    let v = s.unimodularity_check();
    let witness = v.witness.as_ref().map(|w| w.render("d", s.ctx()));
    let text = match &witness {
        None => "true".to_string(),
        Some(w) => format!("false; witness {w}"),
    };
    ctx.emit(text, json!({ "unimodular": v.holds, "witness": witness }));
    Ok(())
}

fn run_lcs(ctx: &Ctx, action: LcsAction) -> CliResult<()> {
    match action {
        LcsAction::Classify { algebra: arg } => {
            let s = algebra(ctx, &arg)?;
            let cl = lcs_families(&s).map_err(compute)?;
            let lee_ctx = &cl.lee_forms.solution.ctx;
            let mut text = vec!["Lee forms:".to_string()];
            for (c, t) in &cl.lee_forms.forms {
                let cond = if c.is_empty() {
                    String::new()
                } else {
                    format!("  where {}", c.render(lee_ctx))
                };
                text.push(format!("  theta = {}{cond}", t.render(lee_ctx)));
            }
            text.push("Families:".to_string());
            for f in &cl.families {
                let kind = match (f.symplectic, f.degenerate) {
                    (_, true) => "degenerate",
                    (true, false) => "symplectic",
                    (false, false) => "lcs",
                };
                text.push(format!(
                    "  [{kind}] theta = {}, Omega = {}",
                    f.theta.render(&cl.ctx),
                    f.omega.render(&cl.ctx)
                ));
                if !f.conditions.is_empty() {
                    text.push(format!("    where {}", f.conditions.render(&cl.ctx)));
                }
                if !f.degenerate {
                    text.push(format!(
                        "    nondegenerate when {}",
                        f.render_condition(&cl.ctx)
                    ));
                }
            }
            let mut value = cl.to_json();
            if let Some(notes) = catalog_entry(&arg)?.and_then(|e| e.lcs.as_ref()) {
                let target = cl
                    .nondegenerate()
                    .find(|f| !f.symplectic && f.theta.render(&cl.ctx) == notes.theta);
                if let Some(f) = target {
                    let m = catalog::normalization_matrix(notes, &cl.ctx).map_err(compute)?;
                    let g = apply_normalization(&s, f, &m, &cl.ctx).map_err(compute)?;
                    text.push(format!(
                        "Normalized: theta = {}, Omega = {}",
                        g.theta.render(&cl.ctx),
                        g.omega.render(&cl.ctx)
                    ));
                    value["normalized"] = g.to_json(&cl.ctx);
                }
            }
            ctx.emit(text.join("\n"), value);
        }
        LcsAction::Equivalence { algebra: arg } => {
            let s = algebra(ctx, &arg)?;
            let notes = catalog_entry(&arg)?
                .and_then(|e| e.lcs.as_ref())
                .ok_or_else(|| input(format!("no recorded lcs normal form for '{arg}'")))?;
            let pctx = ParameterContext::from_names(&["sigma1", "sigma2"]).map_err(compute)?;
            let parse = |t: &str| parse_element(t, s.dim(), &pctx).map_err(compute);
            let p = EquivalenceProblem {
                algebra: s.clone(),
                theta: parse(notes.theta)?,
                omega1: parse(&notes.normal_form.replace("sigma", "sigma1"))?,
                omega2: parse(&notes.normal_form.replace("sigma", "sigma2"))?,
                ctx: pctx.clone(),
            };
            let v = p.are_equivalent().map_err(compute)?;
            let head = match &v {
                EquivalenceVerdict::Inequivalent { witness, ring, .. } => {
                    format!(
                        "inequivalent unless {} = 0",
                        witness.fmt_with(&ring.namer())
                    )
                }
                EquivalenceVerdict::Undecided { .. } => "undecided".to_string(),
            };
            ctx.emit(format!("{head}\n{}", v.render_basis()), v.to_json());
        }
    }
    Ok(())
}

fn order_from(name: Option<&str>) -> CliResult<MonomialOrder> {
    match name.unwrap_or("degrevlex") {
        "degrevlex" => Ok(MonomialOrder::degrevlex()),
        "lex" => Ok(MonomialOrder::lex()),
        "deglex" => Ok(MonomialOrder::deglex()),
        other => Err(input(format!("unknown monomial order '{other}'"))),
    }
}

fn string_list(v: &Value, key: &str) -> CliResult<Vec<String>> {
    match v.get(key) {
        None => Ok(Vec::new()),
        Some(Value::Array(a)) => a
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| input(format!("'{key}' entries must be strings")))
            })
            .collect(),
        Some(_) => Err(input(format!("'{key}' must be a list of strings"))),
    }
}

fn groebner_report<C: Field>(
    gens: &[Polynomial<C>],
    members: &[(String, Polynomial<C>)],
    order: &MonomialOrder,
    names: &dyn Fn(usize) -> String,
) -> CliResult<(String, Value)> {
    let g = groebner::groebner_basis(gens, order, DEFAULT_PAIR_BUDGET).map_err(compute)?;
    let rendered: Vec<String> = g
        .iter()
        .map(|p| groebner::render_in_order(p, order, names))
        .collect();
    let mut text = groebner::render_basis(&g, order, names);
    let mut membership = serde_json::Map::new();
    for (src, f) in members {
        let inside = groebner::normal_form(f, &g, order).is_zero();
        text.push_str(&format!("\n{src} in ideal: {inside}"));
        membership.insert(src.clone(), json!(inside));
    }
    Ok((text, json!({ "basis": rendered, "membership": membership })))
}

fn run_groebner(ctx: &Ctx, path: &str) -> CliResult<()> {
    let v = read_json(path)?;
    if let Some(obj) = v.as_object() {
        if let Some(k) = obj
            .keys()
            .find(|k| !matches!(k.as_str(), "vars" | "generators" | "order" | "membership"))
        {
            return Err(input(format!("{path}: unknown key '{k}'")));
        }
    }
    let mut vars = string_list(&v, "vars")?;
    if vars.is_empty() {
        vars = ctx.params.clone();
    }
    let pctx = ParameterContext::from_names(&vars).map_err(input)?;
    let order = order_from(v.get("order").and_then(Value::as_str))?;
    let parse = |t: &str| -> CliResult<Polynomial<GaussianRational>> {
        nilcoh::coeff::parse_scalar(t, &pctx)
            .map_err(|e| input(format!("{t}: {e}")))?
            .to_poly()
            .ok_or_else(|| input(format!("{t}: not a polynomial")))
    };
    let gens = string_list(&v, "generators")?
        .iter()
        .map(|t| parse(t))
        .collect::<CliResult<Vec<_>>>()?;
    let members = string_list(&v, "membership")?
        .into_iter()
        .map(|t| parse(&t).map(|p| (t, p)))
        .collect::<CliResult<Vec<_>>>()?;
    let namer = pctx.namer();
    let (text, value) = if ctx.field == Some(FieldArg::Qqi) {
        groebner_report(&gens, &members, &order, &namer)?
    } else {
        let real = |p: &Polynomial<GaussianRational>| {
            p.try_map_coeffs(|c| c.im.is_zero().then(|| c.re.clone()))
                .ok_or_else(|| input("non-real coefficient over QQ; use --field QQi"))
        };
        let g: Vec<Polynomial<Rational>> = gens.iter().map(real).collect::<CliResult<_>>()?;
        let m = members
            .iter()
            .map(|(s, p)| real(p).map(|q| (s.clone(), q)))
            .collect::<CliResult<Vec<_>>>()?;
        groebner_report(&g, &m, &order, &namer)?
    };
    ctx.emit(text, value);
    Ok(())
}

fn run_jacobi(ctx: &Ctx, arg: &str) -> CliResult<()> {
    let s = algebra_unchecked(arg)?;
    ctx.check_field(&s)?;
    let v = s.jacobi_check();
    let witness = v.witness.as_ref().map(|w| w.render("d^2", s.ctx()));
    let text = match &witness {
        None => "true".to_string(),
        Some(w) => format!("false; witness {w}"),
    };
    ctx.emit(text, json!({ "jacobi": v.holds, "witness": witness }));
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let ctx = Ctx {
        format: cli.format,
        field: cli.field,
        params: cli.params,
    };
    match cli.command {
        Command::Catalog { action } => run_catalog(&ctx, action),
        Command::Jacobi { algebra } => run_jacobi(&ctx, &algebra),
        Command::Betti { algebra } => run_betti(&ctx, &algebra),
        Command::Poincare { algebra, all } => run_poincare(&ctx, algebra, all),
        Command::Novikov { algebra, theta } => run_novikov(&ctx, &algebra, &theta),
        Command::Dolbeault(a) => run_bigraded(&ctx, &a, Theory::Dolbeault),
        Command::BottChern(a) => run_bigraded(&ctx, &a, Theory::BottChern),
        Command::Aeppli(a) => run_bigraded(&ctx, &a, Theory::Aeppli),
        Command::Unimodular { algebra } => run_unimodular(&ctx, &algebra),
        Command::Lcs { action } => run_lcs(&ctx, action),
        Command::Groebner { ideal } => run_groebner(&ctx, &ideal),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
