//! `foliate` command-line front end.
//!
//! Exit status: 0 on mathematical success, 1 on mathematical failure, 2 on
//! usage or parse errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use foliate::division::{
    derham_solve, dichotomy, divides_with_generators, saito_solve, theorem_b_decide, ComponentSample,
    DivisionCertificate, DivisionError, LocalGenerators,
};
use foliate::extcalc::{KForm, PolyVectorField};
use foliate::geometry::{linear_rank_at, linear_rank_at_point, split_construct, LinearRank, ProjDistribution, ProjFoliation1D};
use foliate::groebner::Ideal;
use foliate::parse::{infer_nvars, parse_field, parse_form, parse_poly, split_list};
use foliate::poly::{Poly, Rational};
use foliate::theoremc::{reproduce, CaseTag, JordanCase, ReproduceReport};

#[derive(Parser)]
#[command(name = "foliate", version, about = "Exact checks for distributions and foliations on projective space")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Ambient variable count; inferred from the highest index mentioned otherwise.
    #[arg(long, global = true)]
    nvars: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Defining conditions of the distribution given by a homogeneous form.
    Validate(FormArg),
    /// Degree of a distribution (form) or one-dimensional foliation (field).
    Degree(FormOrField),
    /// Singular ideal and its projective codimension.
    Singular(FormOrField),
    /// Affine (and, for homogeneous ideals, projective) dimension of an ideal.
    Dimension {
        /// Comma-separated generators.
        #[arg(long)]
        ideal: String,
    },
    /// Frobenius integrability of a codimension-one or one-dimensional distribution.
    Integrable(FormArg),
    /// The form i_{X_1} ... i_{X_k} i_R vol of homogeneous fields.
    Split {
        /// Homogeneous fields X_1, ..., X_k.
        #[arg(long, num_args = 1.., required = true)]
        fields: Vec<String>,
    },
    /// Homogeneous fields of a given degree tangent to a form, modulo R.
    TangentFields {
        #[arg(long)]
        form: String,
        #[arg(long)]
        degree: u32,
    },
    /// Whether a field locally divides the germ i_{Y_1} ... i_{Y_k} Θ.
    Divides(DivisionArgs),
    /// The divide-or-regular alternative for a singular field of large linear rank.
    Dichotomy(DivisionArgs),
    /// Solve i_X β = α.
    Saito {
        #[arg(long)]
        field: String,
        #[arg(long)]
        form: String,
        /// Coefficient degree bound for β.
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Solve ω₁ ∧ β = α.
    Derham {
        #[arg(long)]
        omega1: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Jacobian rank at a singular point: the origin of an affine field, or a
    /// projective point of a homogeneous field.
    LinearRank {
        #[arg(long)]
        field: String,
        /// Comma-separated homogeneous coordinates.
        #[arg(long)]
        point: Option<String>,
    },
    /// Splitting conditions for a 2-dimensional distribution tangent to a
    /// one-dimensional foliation.
    TheoremB {
        #[arg(long)]
        form: String,
        #[arg(long)]
        field: String,
        /// Component of sing(G) as `IDEAL@POINT`, both comma-separated.
        #[arg(long = "component", required = true)]
        components: Vec<String>,
    },
    /// Invariant-form computations for the linear normal forms on P^3.
    Reproduce {
        /// Case tags (I..VI).
        #[arg(long = "case", required = true, num_args = 1..)]
        cases: Vec<String>,
        /// Degrees of the foliations.
        #[arg(long = "degree", required = true, num_args = 1..)]
        degrees: Vec<u32>,
        /// Parameter a (cases I-IV).
        #[arg(long)]
        a: Option<String>,
        /// Parameter b (cases I and IV).
        #[arg(long)]
        b: Option<String>,
        /// Where to write the JSON report.
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct FormArg {
    /// Homogeneous form, or a file containing one.
    #[arg(long)]
    form: String,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormOrField {
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args)]
struct DivisionArgs {
    /// The dividing field X.
    #[arg(long)]
    field: String,
    /// Local generators Y_1, ..., Y_k.
    #[arg(long, num_args = 1.., required = true)]
    gens: Vec<String>,
    /// Top-degree form Θ, nonvanishing at the origin (default: the volume form).
    #[arg(long)]
    theta: Option<String>,
    /// Comma-separated basepoint (default: the origin).
    #[arg(long)]
    at: Option<String>,
}

enum CliError {
    Usage(String),
    Math(String),
}

impl From<foliate::parse::ParseError> for CliError {
    fn from(e: foliate::parse::ParseError) -> Self {
        CliError::Usage(format!("parse error: {e}"))
    }
}

fn math<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Math(e.to_string())
}

fn division_error(e: DivisionError) -> CliError {
    match e {
        DivisionError::Calc(_) => CliError::Usage(e.to_string()),
        _ => CliError::Math(e.to_string()),
    }
}

/// Result of a command: the report and whether it is a mathematical success.
struct Report {
    ok: bool,
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable")),
                Format::Text => println!("{}", r.text),
            }
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Math(m)) => {
            match cli.format {
                Format::Json => println!("{}", json!({ "error": m })),
                Format::Text => eprintln!("error: {m}"),
            }
            ExitCode::from(1)
        }
    }
}

/// An argument is read from the file it names, if there is one.
fn source(arg: &str) -> Result<String, CliError> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn sources(args: &[&String]) -> Result<Vec<String>, CliError> {
    args.iter().map(|a| source(a)).collect()
}

fn rationals(src: &str) -> Result<Vec<Rational>, CliError> {
    split_list(src).into_iter().map(rational).collect()
}

fn rational(s: &str) -> Result<Rational, CliError> {
    s.trim().parse::<Rational>().map_err(|_| CliError::Usage(format!("not a rational number: '{s}'")))
}

fn strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(Poly::to_string).collect()
}

fn distribution(omega: KForm) -> Result<ProjDistribution, CliError> {
    let nv = omega.nvars();
    if nv < 2 {
        return Err(CliError::Usage("a distribution needs at least 2 homogeneous variables".into()));
    }
    let n = nv - 1;
    if omega.degree() > n {
        return Err(CliError::Usage(format!("a {}-form on P^{n} defines no distribution", omega.degree())));
    }
    ProjDistribution::new(n, n - omega.degree(), omega).map_err(|e| CliError::Usage(e.to_string()))
}

fn cert_report(cert: &DivisionCertificate) -> Report {
    let mut text = cert.label().to_string();
    match &cert.outcome {
        foliate::division::Outcome::Divides { witness } => text.push_str(&format!("\nbeta = {}", witness.beta())),
        foliate::division::Outcome::Fails { values_at_basepoint } => {
            text.push_str(&format!("\nvalues at basepoint: {}", values_at_basepoint.join(", ")))
        }
        foliate::division::Outcome::Regular { linear_rank } => text.push_str(&format!("\nlinear rank {linear_rank}")),
    }
    Report { ok: cert.divides() || cert.label() == "REGULAR", json: serde_json::to_value(cert).unwrap(), text }
}

fn rank_value(r: LinearRank) -> (Value, String) {
    match r {
        LinearRank::Rank(k) => (json!(k), k.to_string()),
        LinearRank::NonSingular => (Value::Null, "not singular".into()),
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let nv = cli.nvars;
    match &cli.command {
        Command::Validate(FormArg { form }) => {
            let src = source(form)?;
            let d = distribution(parse_form(&src, nv)?)?;
            let flags = d.validate();
            let ok = flags.all_pass();
            let text = format!(
                "{}-dimensional distribution on P^{} of degree {}\nradial contraction zero: {}\nhomogeneous: {}\ncodim sing >= 2: {}{}\ndecomposable: {:?}\n{}",
                d.k(),
                d.n(),
                d.degree().map_or("undefined".into(), |x| x.to_string()),
                flags.radial_contraction_zero,
                flags.homogeneous,
                flags.codim_sing_ge_2,
                flags.common_divisor.as_ref().map_or(String::new(), |g| format!(" (common divisor {g})")),
                flags.decomposable,
                if ok { "VALID" } else { "INVALID" }
            );
            Ok(Report { ok, json: json!({ "valid": ok, "distribution": d.to_json() }), text })
        }
        Command::Degree(FormOrField { form, field }) => {
            if let Some(f) = form {
                let d = distribution(parse_form(&source(f)?, nv)?)?;
                let deg = d.degree().map_err(math)?;
                Ok(Report { ok: true, json: json!({ "kind": "distribution", "degree": deg }), text: deg.to_string() })
            } else {
                let g = ProjFoliation1D::new(parse_field(&source(field.as_ref().unwrap())?, nv)?).map_err(math)?;
                let deg = g.degree();
                Ok(Report { ok: true, json: json!({ "kind": "foliation", "degree": deg }), text: deg.to_string() })
            }
        }
        Command::Singular(FormOrField { form, field }) => {
            let ideal = if let Some(f) = form {
                distribution(parse_form(&source(f)?, nv)?)?.singular_ideal()
            } else {
                ProjFoliation1D::new(parse_field(&source(field.as_ref().unwrap())?, nv)?).map_err(math)?.singular_ideal()
            };
            let codim = ideal.projective_codim();
            let gens = strings(ideal.generators());
            let text = format!("generators: {}\nprojective codimension: {codim}", gens.join(", "));
            Ok(Report { ok: true, json: json!({ "generators": gens, "projective_codim": codim }), text })
        }
        Command::Dimension { ideal } => {
            let src = source(ideal)?;
            let items = split_list(&src);
            let n = infer_nvars(&items, nv)?;
            let gens = items.iter().map(|s| parse_poly(s, Some(n))).collect::<Result<Vec<_>, _>>()?;
            let ideal = Ideal::new(n, gens).map_err(math)?;
            let dim = ideal.dimension();
            let proj = ideal.is_homogeneous().then(|| ideal.projective_dimension());
            let text = dim.to_string();
            Ok(Report { ok: true, json: json!({ "nvars": n, "dimension": dim, "projective_dimension": proj }), text })
        }
        Command::Integrable(FormArg { form }) => {
            let d = distribution(parse_form(&source(form)?, nv)?)?;
            let ok = d.is_integrable().map_err(|e| CliError::Usage(e.to_string()))?;
            let text = if ok { "INTEGRABLE" } else { "NOT INTEGRABLE" }.to_string();
            Ok(Report { ok, json: json!({ "integrable": ok }), text })
        }
        Command::Split { fields } => {
            let srcs = sources(&fields.iter().collect::<Vec<_>>())?;
            let n = infer_nvars(&srcs.iter().map(String::as_str).collect::<Vec<_>>(), nv)?;
            let xs = srcs.iter().map(|s| parse_field(s, Some(n))).collect::<Result<Vec<_>, _>>()?;
            let d = split_construct(&xs, n.saturating_sub(1)).map_err(math)?;
            let text = format!("{}\ndegree {}", d.omega(), d.degree().map_err(math)?);
            Ok(Report { ok: true, json: d.to_json(), text })
        }
        Command::TangentFields { form, degree } => {
            let d = distribution(parse_form(&source(form)?, nv)?)?;
            let tf = d.tangent_fields(*degree).map_err(math)?;
            let quotient: Vec<String> = tf.quotient.iter().map(PolyVectorField::to_string).collect();
            let text = if quotient.is_empty() { "none".to_string() } else { quotient.join("\n") };
            let json = json!({
                "degree": degree,
                "kernel_dim": tf.basis.len(),
                "quotient_dim": tf.quotient_dim(),
                "quotient": quotient,
            });
            Ok(Report { ok: true, json, text })
        }
        Command::Divides(args) | Command::Dichotomy(args) => {
            let mut all: Vec<&String> = vec![&args.field];
            all.extend(&args.gens);
            all.extend(&args.theta);
            let srcs = sources(&all)?;
            let n = infer_nvars(&srcs.iter().map(String::as_str).collect::<Vec<_>>(), nv)?;
            let x = parse_field(&srcs[0], Some(n))?;
            let ys = srcs[1..=args.gens.len()].iter().map(|s| parse_field(s, Some(n))).collect::<Result<Vec<_>, _>>()?;
            let gens = match &args.theta {
                Some(_) => LocalGenerators::new(ys, parse_form(srcs.last().unwrap(), Some(n))?),
                None => LocalGenerators::with_volume(ys),
            }
            .map_err(division_error)?;
            let at = args.at.as_deref().map(rationals).transpose()?;
            if at.as_ref().is_some_and(|p| p.len() != n) {
                return Err(CliError::Usage(format!("basepoint must have {n} coordinates")));
            }
            let cert = if matches!(cli.command, Command::Divides(_)) {
                divides_with_generators(&x, &gens, at.as_deref())
            } else {
                dichotomy(&x, &gens, at.as_deref())
            }
            .map_err(division_error)?;
            Ok(cert_report(&cert))
        }
        Command::Saito { field, form, cap } => {
            let srcs = sources(&[field, form])?;
            let n = infer_nvars(&[&srcs[0], &srcs[1]], nv)?;
            let x = parse_field(&srcs[0], Some(n))?;
            let alpha = parse_form(&srcs[1], Some(n))?;
            let beta = saito_solve(&x, &alpha, *cap).map_err(division_error)?;
            Ok(solution_report(beta))
        }
        Command::Derham { omega1, form, cap } => {
            let srcs = sources(&[omega1, form])?;
            let n = infer_nvars(&[&srcs[0], &srcs[1]], nv)?;
            let w = parse_form(&srcs[0], Some(n))?;
            let alpha = parse_form(&srcs[1], Some(n))?;
            let beta = derham_solve(&w, &alpha, *cap).map_err(division_error)?;
            Ok(solution_report(beta))
        }
        Command::LinearRank { field, point } => {
            let x = parse_field(&source(field)?, nv)?;
            let rank = match point {
                None => linear_rank_at(&x).map_err(math)?,
                Some(p) => {
                    let p = rationals(p)?;
                    let g = ProjFoliation1D::new(x).map_err(math)?;
                    linear_rank_at_point(&g, &p).map_err(math)?
                }
            };
            let (j, t) = rank_value(rank);
            Ok(Report { ok: matches!(rank, LinearRank::Rank(_)), json: json!({ "linear_rank": j }), text: t })
        }
        Command::TheoremB { form, field, components } => {
            let srcs = sources(&[form, field])?;
            let mut all: Vec<&str> = vec![&srcs[0], &srcs[1]];
            let split: Vec<(&str, &str)> = components
                .iter()
                .map(|c| c.split_once('@').ok_or_else(|| CliError::Usage(format!("component '{c}' is not IDEAL@POINT"))))
                .collect::<Result<_, _>>()?;
            for (ideal, _) in &split {
                all.extend(split_list(ideal));
            }
            let n = infer_nvars(&all, nv)?;
            let d = distribution(parse_form(&srcs[0], Some(n))?)?;
            let g = ProjFoliation1D::new(parse_field(&srcs[1], Some(n))?).map_err(math)?;
            let comps = split
                .iter()
                .map(|(ideal, point)| {
                    let gens = split_list(ideal).into_iter().map(|s| parse_poly(s, Some(n))).collect::<Result<Vec<_>, _>>()?;
                    let point = rationals(point)?;
                    if point.len() != n {
                        return Err(CliError::Usage(format!("point must have {n} coordinates")));
                    }
                    Ok(ComponentSample { ideal: Ideal::new(n, gens).map_err(math)?, point })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let report = theorem_b_decide(&d, &g, &comps).map_err(division_error)?;
            let text = match report.split_type {
                Some((a, b)) => format!("SPLITS as O({a}) + O({b})"),
                None if !report.not_free_at.is_empty() => format!(
                    "NOT LOCALLY FREE at {}",
                    report.not_free_at.iter().map(|p| format!("({})", p.join(":"))).collect::<Vec<_>>().join(", ")
                ),
                None => "conditions fail".to_string(),
            };
            Ok(Report { ok: report.split_type.is_some(), json: serde_json::to_value(&report).unwrap(), text })
        }
        Command::Reproduce { cases, degrees, a, b, out } => {
            let a = a.as_deref().map(rational).transpose()?;
            let b = b.as_deref().map(rational).transpose()?;
            let mut reports: Vec<ReproduceReport> = Vec::new();
            for c in cases {
                let tag: CaseTag = c.parse().map_err(CliError::Usage)?;
                let (ca, cb) = match tag {
                    CaseTag::V | CaseTag::VI => (None, None),
                    CaseTag::II | CaseTag::III => (a.clone(), None),
                    _ => (a.clone(), b.clone()),
                };
                let case = JordanCase::new(tag, ca, cb).map_err(|e| CliError::Usage(e.to_string()))?;
                for d in degrees {
                    reports.push(reproduce(&case, *d).map_err(math)?);
                }
            }
            reports.sort_by_key(|x| (x.case.tag(), x.degree));
            reports.dedup_by(|x, y| x.case == y.case && x.degree == y.degree);
            let json = if reports.len() == 1 {
                serde_json::to_value(&reports[0]).unwrap()
            } else {
                serde_json::to_value(&reports).unwrap()
            };
            let body = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
            std::fs::write(out, body).map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
            let ok = reports.iter().all(|r| r.twelve_zero != Some(false) && r.chains_found != Some(false));
            let text = reports.iter().map(reproduce_line).collect::<Vec<_>>().join("\n");
            Ok(Report { ok, json, text })
        }
    }
}

fn solution_report(beta: Option<KForm>) -> Report {
    match beta {
        Some(b) => Report { ok: true, json: json!({ "solvable": true, "beta": b }), text: format!("beta = {b}") },
        None => Report {
            ok: false,
            json: json!({ "solvable": false, "beta": null }),
            text: "no solution within the degree bound".into(),
        },
    }
}

fn reproduce_line(r: &ReproduceReport) -> String {
    let opt = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
    let split = r.split_type.map_or("-".to_string(), |(a, b)| format!("O({a}) + O({b})"));
    let mut line = format!(
        "case {} d={}: kernel dim {}, twelve zero {}, chains {}, split {}",
        r.case,
        r.degree,
        r.kernel_dim,
        opt(r.twelve_zero),
        opt(r.chains_found),
        split
    );
    if let Some(i) = &r.integrability {
        line.push_str(&format!(", integrable for all members {}", i.always_integrable()));
    }
    line
}
