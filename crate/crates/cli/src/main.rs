mod parse;
mod plot;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Integer, Rational};
use serde::Serialize;

use hookpoly::asymptotics::{
    ratio_report_in, rr_claim_check, zero_localization_check, LargeWConstant, Regime, ReportOptions,
};
use hookpoly::config::JobConfig;
use hookpoly::numerics::{eval_at, theta, PrecComplex, ThetaForm, ThetaSpec};
use hookpoly::partitions::{brute_force_pt, brute_force_qn};
use hookpoly::qseries::{
    expand_ht, expand_pab, expand_qn, expand_tcore, pab_coefficient, Family, PolyRecord,
    RationalPair, WPolynomial,
};
use hookpoly::roots::{find_roots, theta_zeros, ZeroRecord};

use parse::{integral, parse_complex, parse_range, parse_rational};
use plot::{read_roots_csv, render_svg, PlotSpec, Window};

/// Hook-length polynomials: exact expansion, certified zeros, theta
/// functions and asymptotic main terms.
#[derive(Parser, Debug)]
#[command(name = "hookpoly", version)]
struct Cli {
    /// JSON file with default numeric settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for data-parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Working precision in bits; overrides the config.
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Output file, relative to the configured output directory; stdout if absent.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polynomial by direct enumeration of partitions.
    Brute {
        #[arg(long, value_enum, default_value_t = BruteFamily::Hook)]
        family: BruteFamily,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        n: u32,
    },
    /// Polynomial records from the generating functions.
    Expand(FamilyArgs),
    /// Certified roots of a polynomial, as CSV.
    Roots {
        #[command(flatten)]
        family: FamilyArgs,
        /// Coefficients as a JSON integer array, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// A polynomial record file.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Relative residual required of every root.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// SVG scatter plot of a roots CSV.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xmin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        xmax: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        ymin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        ymax: Option<f64>,
        #[arg(long)]
        rmin: Option<f64>,
        #[arg(long)]
        rmax: Option<f64>,
        /// Draw the unit circle as a guide.
        #[arg(long)]
        unit_circle: bool,
        #[arg(long, default_value_t = 3.0)]
        marker_radius: f64,
        /// Defaults to the input file name.
        #[arg(long)]
        title: Option<String>,
    },
    /// Theta function value by one or all evaluation forms.
    Theta {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        ell: u32,
        /// `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value_t = FormArg::All)]
        form: FormArg,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Zeros of the theta function in |z| ≤ 1/(1+eps) and their reciprocals.
    ThetaZeros {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Singular series A_t(w, n).
    At {
        #[arg(long)]
        t: u32,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// A value or `start:stop:step`.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
    },
    /// Exact values against an asymptotic main term, as CSV.
    Compare {
        /// Defaults to `large` for |w| > 1 and `small` otherwise.
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
        #[arg(long)]
        t: u32,
        /// Residue class of n; required in the large regime.
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// A value or `start:stop:step`.
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value_t = ConstantArg::Derived)]
        constant: ConstantArg,
        /// Absolute tolerance for the singular series.
        #[arg(long, default_value_t = 1e-3)]
        at_tol: f64,
    },
    /// Classifies the zeros of P_t(w, n) by region.
    Localize {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        w0: Option<f64>,
    },
    /// Checks that every root of p_{1,b}(w; n) has nonpositive real part.
    Rr {
        #[arg(long)]
        b: u32,
        /// A value or `start:stop:step`.
        #[arg(long)]
        n: String,
        /// Largest real part accepted.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args, Debug, Default)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    t: Option<u32>,
    /// Exact index, integer or p/q.
    #[arg(long)]
    n: Option<String>,
    /// Every index up to this bound.
    #[arg(long)]
    nmax: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    Hook,
    Parts,
    Rr,
    Tcore,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BruteFamily {
    Hook,
    Parts,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormArg {
    Lattice,
    Partition,
    RootsOfUnity,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RegimeArg {
    Large,
    Small,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ConstantArg {
    Derived,
    Printed,
}

/// A bad combination of flags; exits with the usage status.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Exit statuses.
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CERTIFICATION: u8 = 3;
const EXIT_ERROR: u8 = 4;

struct Ctx {
    cfg: JobConfig,
    output: Option<PathBuf>,
}

impl Ctx {
    fn prec(&self) -> u32 {
        self.cfg.precision_bits
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        match &self.output {
            None => Ok(Box::new(io::stdout().lock())),
            Some(p) => {
                let path = self.cfg.output_dir.join(p);
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)
                        .with_context(|| format!("creating {}", dir.display()))?;
                }
                let f =
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                Ok(Box::new(io::BufWriter::new(f)))
            }
        }
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn emit_text(&self, text: &str) -> Result<()> {
        let mut w = self.writer()?;
        w.write_all(text.as_bytes())?;
        w.flush()?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.is::<Usage>() {
                EXIT_USAGE
            } else if matches!(
                e.downcast_ref::<hookpoly::Error>(),
                Some(hookpoly::Error::Certification(_))
            ) {
                EXIT_CERTIFICATION
            } else {
                EXIT_ERROR
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let mut cfg =
        JobConfig::load(cli.config.as_deref()).map_err(|e| usage(format!("config: {e}")))?;
    if let Some(p) = cli.prec {
        cfg.precision_bits = p;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    if let Some(jobs) = cli.jobs {
        set_jobs(jobs)?;
    }
    let ctx = Ctx {
        cfg,
        output: cli.output,
    };
    match cli.command {
        Command::Brute { family, t, n } => cmd_brute(&ctx, family, t, n),
        Command::Expand(args) => cmd_expand(&ctx, &args),
        Command::Roots {
            family,
            poly,
            input,
            tol,
        } => cmd_roots(&ctx, &family, poly.as_deref(), input.as_deref(), tol),
        Command::Plot {
            input,
            xmin,
            xmax,
            ymin,
            ymax,
            rmin,
            rmax,
            unit_circle,
            marker_radius,
            title,
        } => {
            let window = Window {
                xmin,
                xmax,
                ymin,
                ymax,
                rmin,
                rmax,
            };
            cmd_plot(&ctx, &input, window, unit_circle, marker_radius, title)
        }
        Command::Theta {
            t,
            ell,
            z,
            form,
            tol,
        } => cmd_theta(&ctx, t, ell, &z, form, tol),
        Command::ThetaZeros { t, ell, eps } => cmd_theta_zeros(&ctx, t, ell, eps),
        Command::At { t, w, n, tol } => cmd_at(&ctx, t, &w, &n, tol),
        Command::Compare {
            regime,
            t,
            ell,
            w,
            n,
            constant,
            at_tol,
        } => cmd_compare(&ctx, regime, t, ell, &w, &n, constant, at_tol),
        Command::Localize { t, ell, n, eps, w0 } => cmd_localize(&ctx, t, ell, n, eps, w0),
        Command::Rr { b, n, tol } => cmd_rr(&ctx, b, &n, tol),
    }
}

#[cfg(feature = "parallel")]
fn set_jobs(jobs: usize) -> Result<()> {
    if jobs == 0 {
        return Err(usage("--jobs must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()?;
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn set_jobs(jobs: usize) -> Result<()> {
    if jobs == 0 {
        return Err(usage("--jobs must be positive"));
    }
    Ok(())
}

fn cmd_brute(ctx: &Ctx, family: BruteFamily, t: Option<u32>, n: u32) -> Result<u8> {
    let cap = ctx.cfg.enumeration_cap;
    let rec = match family {
        BruteFamily::Hook => {
            let t = t.ok_or_else(|| usage("--family hook needs --t"))?;
            let p = brute_force_pt(t, n, cap)?;
            PolyRecord::new(Family::Hook, Some(t), None, &Rational::from(n), &p)
        }
        BruteFamily::Parts => {
            if t.is_some() {
                return Err(usage("--t does not apply to --family parts"));
            }
            let p = brute_force_qn(n, cap)?;
            PolyRecord::new(Family::Parts, None, None, &Rational::from(n), &p)
        }
    };
    ctx.emit_json(&rec)?;
    Ok(0)
}

/// Which indices a family request covers.
enum Span {
    One(Rational),
    UpTo(Rational),
}

struct FamilyRequest {
    family: Family,
    t: Option<u32>,
    ab: Option<RationalPair>,
    span: Span,
}

fn family_request(args: &FamilyArgs) -> Result<FamilyRequest> {
    let family = match args.family.ok_or_else(|| usage("--family is required"))? {
        FamilyArg::Hook => Family::Hook,
        FamilyArg::Parts => Family::Parts,
        FamilyArg::Rr => Family::Rr,
        FamilyArg::Tcore => Family::Tcore,
    };
    let span = match (&args.n, &args.nmax) {
        (Some(n), None) => Span::One(parse_rational(n).map_err(|e| usage(e.to_string()))?),
        (None, Some(m)) => Span::UpTo(parse_rational(m).map_err(|e| usage(e.to_string()))?),
        _ => return Err(usage("exactly one of --n and --nmax is required")),
    };
    let has_ab = args.a.is_some() || args.b.is_some();
    let ab = match family {
        Family::Rr => {
            if args.t.is_some() {
                return Err(usage("--t does not apply to --family rr"));
            }
            let (Some(a), Some(b)) = (&args.a, &args.b) else {
                return Err(usage("--family rr needs --a and --b"));
            };
            let a = parse_rational(a).map_err(|e| usage(e.to_string()))?;
            let b = parse_rational(b).map_err(|e| usage(e.to_string()))?;
            Some(RationalPair::new(a, b).map_err(|e| usage(e.to_string()))?)
        }
        Family::Hook | Family::Tcore => {
            if has_ab {
                return Err(usage("--a and --b only apply to --family rr"));
            }
            if args.t.is_none() {
                return Err(usage("this family needs --t"));
            }
            None
        }
        Family::Parts => {
            if has_ab || args.t.is_some() {
                return Err(usage("--family parts takes no --t, --a or --b"));
            }
            None
        }
    };
    Ok(FamilyRequest {
        family,
        t: args.t,
        ab,
        span,
    })
}

/// Records for every index the request covers.
fn family_records(ctx: &Ctx, req: &FamilyRequest) -> Result<Vec<(PolyRecord, WPolynomial)>> {
    let cap = ctx.cfg.series_trunc as u64;
    let record = |n: &Rational, p: WPolynomial| {
        let ab = req.ab.as_ref().map(|ab| (ab.a(), ab.b()));
        (PolyRecord::new(req.family, req.t, ab, n, &p), p)
    };
    let (lo, hi) = match &req.span {
        Span::One(n) => (Some(n.clone()), n.clone()),
        Span::UpTo(m) => (None, m.clone()),
    };
    if let Family::Rr = req.family {
        let ab = req.ab.as_ref().expect("checked");
        return match lo {
            Some(n) => Ok(vec![record(&n, pab_coefficient(ab, &n)?)]),
            None => {
                let s = expand_pab(ab, &hi, None)?;
                Ok(s.iter()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(n, p)| record(&n, p.clone()))
                    .collect())
            }
        };
    }
    let top = integral(&hi, "n").map_err(|e| usage(e.to_string()))?;
    if top > cap {
        return Err(hookpoly::Error::ResourceLimit {
            what: "series truncation",
            requested: top,
            cap,
        }
        .into());
    }
    let top = top as usize;
    let polys: Vec<WPolynomial> = match req.family {
        Family::Hook => expand_ht(req.t.expect("checked"), top)?,
        Family::Parts => expand_qn(top)?,
        Family::Tcore => expand_tcore(req.t.expect("checked"), top)?
            .into_iter()
            .map(WPolynomial::constant)
            .collect(),
        Family::Rr => unreachable!(),
    };
    let pick = |n: usize| record(&Rational::from(n), polys[n].clone());
    Ok(match lo {
        Some(_) => vec![pick(top)],
        None => (0..=top).map(pick).collect(),
    })
}

fn cmd_expand(ctx: &Ctx, args: &FamilyArgs) -> Result<u8> {
    let req = family_request(args)?;
    let recs: Vec<PolyRecord> = family_records(ctx, &req)?
        .into_iter()
        .map(|(r, _)| r)
        .collect();
    match req.span {
        Span::One(_) => ctx.emit_json(&recs[0])?,
        Span::UpTo(_) => ctx.emit_json(&recs)?,
    }
    Ok(0)
}

fn cmd_roots(
    ctx: &Ctx,
    fam: &FamilyArgs,
    poly: Option<&str>,
    input: Option<&Path>,
    tol: Option<f64>,
) -> Result<u8> {
    let has_family = fam.family.is_some();
    let p = match (poly, input, has_family) {
        (Some(s), None, false) => {
            let coeffs: Vec<String> = serde_json::from_str::<Vec<serde_json::Value>>(s)
                .map_err(|e| usage(format!("--poly must be a JSON integer array: {e}")))?
                .into_iter()
                .map(|v| match v {
                    serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
                    serde_json::Value::String(s) => Ok(s),
                    other => Err(usage(format!("non-integer coefficient {other}"))),
                })
                .collect::<Result<_>>()?;
            let ints = coeffs
                .iter()
                .map(|c| {
                    c.parse::<Integer>()
                        .map_err(|_| usage(format!("bad coefficient {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            WPolynomial::from_coeffs(ints)
        }
        (None, Some(path), false) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let rec: PolyRecord = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            rec.polynomial()?
        }
        (None, None, true) => {
            let req = family_request(fam)?;
            if !matches!(req.span, Span::One(_)) {
                return Err(usage("roots needs a single --n"));
            }
            family_records(ctx, &req)?.swap_remove(0).1
        }
        _ => return Err(usage("give exactly one of --poly, --input or --family")),
    };
    if p.degree().unwrap_or(0) == 0 {
        return Err(usage("the polynomial is constant and has no roots"));
    }
    let tol = tol.unwrap_or(ctx.cfg.default_tol);
    let rs = find_roots(&p, ctx.prec(), tol)?;
    let mut w = ctx.writer()?;
    rs.write_csv(&mut w)?;
    w.flush()?;
    Ok(0)
}

fn cmd_plot(
    ctx: &Ctx,
    input: &Path,
    window: Window,
    unit_circle: bool,
    marker_radius: f64,
    title: Option<String>,
) -> Result<u8> {
    let f = File::open(input).with_context(|| format!("opening {}", input.display()))?;
    let points = read_roots_csv(f)?;
    let title = title.unwrap_or_else(|| {
        input
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    let spec = PlotSpec {
        points,
        window,
        marker_radius,
        title,
        unit_circle,
    };
    let (svg, empty) = render_svg(&spec)?;
    if empty {
        eprintln!("warning: no roots fall inside the plot window");
    }
    ctx.emit_text(&svg)?;
    Ok(0)
}

#[derive(Serialize)]
struct Value {
    form: Option<&'static str>,
    re: String,
    im: String,
    err: String,
}

impl Value {
    fn new(form: Option<&'static str>, v: &PrecComplex) -> Self {
        let ZeroRecord { re, im, err } = ZeroRecord::from_prec(v);
        Value { form, re, im, err }
    }
}

fn cmd_theta(ctx: &Ctx, t: u32, ell: u32, z: &str, form: FormArg, tol: Option<f64>) -> Result<u8> {
    #[derive(Serialize)]
    struct Out {
        t: u32,
        ell: u32,
        z: [String; 2],
        values: Vec<Value>,
    }
    let spec = ThetaSpec::new(t, ell).map_err(|e| usage(e.to_string()))?;
    let z = parse_complex(z, ctx.prec()).map_err(|e| usage(e.to_string()))?;
    let tol = tol.unwrap_or(ctx.cfg.default_tol);
    let forms: &[ThetaForm] = match form {
        FormArg::Lattice => &[ThetaForm::Lattice],
        FormArg::Partition => &[ThetaForm::Partition],
        FormArg::RootsOfUnity => &[ThetaForm::RootsOfUnity],
        FormArg::All => &[
            ThetaForm::Lattice,
            ThetaForm::Partition,
            ThetaForm::RootsOfUnity,
        ],
    };
    let values = forms
        .iter()
        .map(|&f| Ok(Value::new(Some(f.name()), &theta(spec, &z, tol, f)?)))
        .collect::<Result<Vec<_>>>()?;
    let (re, im) = z.to_decimal_strings();
    ctx.emit_json(&Out {
        t,
        ell,
        z: [re, im],
        values,
    })?;
    Ok(0)
}

fn cmd_theta_zeros(ctx: &Ctx, t: u32, ell: u32, eps: Option<f64>) -> Result<u8> {
    let spec = ThetaSpec::new(t, ell).map_err(|e| usage(e.to_string()))?;
    let report = theta_zeros(spec, eps.unwrap_or(ctx.cfg.eps), ctx.prec())?;
    ctx.emit_text(&(report.to_json()? + "\n"))?;
    Ok(0)
}

fn cmd_at(ctx: &Ctx, t: u32, w: &str, n: &str, tol: f64) -> Result<u8> {
    #[derive(Serialize)]
    struct Entry {
        n: u64,
        #[serde(flatten)]
        value: Value,
    }
    #[derive(Serialize)]
    struct Out {
        t: u32,
        w: [String; 2],
        values: Vec<Entry>,
    }
    if t < 6 {
        return Err(usage(format!("the singular series needs --t ≥ 6, got {t}")));
    }
    let w = parse_complex(w, ctx.prec()).map_err(|e| usage(e.to_string()))?;
    let ns = parse_range(n).map_err(|e| usage(e.to_string()))?;
    let values = ns
        .iter()
        .map(|&n| {
            Ok(Entry {
                n,
                value: Value::new(None, &eval_at(t, &w, n, tol)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (re, im) = w.to_decimal_strings();
    ctx.emit_json(&Out {
        t,
        w: [re, im],
        values,
    })?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    ctx: &Ctx,
    regime: Option<RegimeArg>,
    t: u32,
    ell: Option<u32>,
    w: &str,
    n: &str,
    constant: ConstantArg,
    at_tol: f64,
) -> Result<u8> {
    let w = parse_complex(w, ctx.prec()).map_err(|e| usage(e.to_string()))?;
    let ns = parse_range(n).map_err(|e| usage(e.to_string()))?;
    let regime = match regime {
        Some(RegimeArg::Large) => Regime::Large,
        Some(RegimeArg::Small) => Regime::Small,
        None => Regime::for_w(&w),
    };
    let ell = match regime {
        Regime::Small => {
            if t < 6 {
                return Err(usage(format!("--regime small needs --t ≥ 6, got {t}")));
            }
            if w.abs_upper() > ctx.cfg.w0 {
                return Err(usage(format!(
                    "--regime small needs |w| ≤ w0 = {}",
                    ctx.cfg.w0
                )));
            }
            ell.unwrap_or(0)
        }
        Regime::Large => {
            if w.abs_lower() <= 1 {
                return Err(usage("--regime large needs |w| > 1"));
            }
            let ell = ell.ok_or_else(|| usage("--regime large needs --ell"))?;
            if let Some(bad) = ns.iter().find(|&&n| n % t.max(1) as u64 != ell as u64) {
                return Err(usage(format!("n = {bad} is not ≡ {ell} (mod {t})")));
            }
            ell
        }
    };
    let opts = ReportOptions {
        theta_tol: ctx.cfg.default_tol,
        at_tol,
        w0: ctx.cfg.w0,
        constant: match constant {
            ConstantArg::Derived => LargeWConstant::Derived,
            ConstantArg::Printed => LargeWConstant::Printed,
        },
    };
    let report = ratio_report_in(regime, t, ell, &w, &ns, &opts)?;
    for e in report.entries.iter().filter(|e| e.near_theta_zero) {
        eprintln!("warning: n = {}: w^-1 is close to a theta zero", e.n);
    }
    let mut out = ctx.writer()?;
    report.write_csv(&mut out)?;
    out.flush()?;
    Ok(0)
}

fn cmd_localize(
    ctx: &Ctx,
    t: u32,
    ell: u32,
    n: u64,
    eps: Option<f64>,
    w0: Option<f64>,
) -> Result<u8> {
    if t < 6 {
        return Err(usage(format!("localize needs --t ≥ 6, got {t}")));
    }
    let v = zero_localization_check(
        t,
        ell,
        n,
        eps.unwrap_or(ctx.cfg.eps),
        w0.unwrap_or(ctx.cfg.w0),
        ctx.prec(),
        ctx.cfg.default_tol,
    )?;
    ctx.emit_text(&(v.to_json()? + "\n"))?;
    Ok(0)
}

fn cmd_rr(ctx: &Ctx, b: u32, n: &str, tol: f64) -> Result<u8> {
    #[derive(Serialize)]
    struct Entry {
        n: u64,
        pass: bool,
        max_re: String,
        max_re_nonzero: Option<String>,
        max_abs_im: String,
        degree: u32,
    }
    #[derive(Serialize)]
    struct Out {
        b: u32,
        tol: f64,
        pass: bool,
        worst_re: String,
        worst_n: Option<u64>,
        results: Vec<Entry>,
    }
    if b > 1 {
        return Err(usage(format!("--b must be 0 or 1, got {b}")));
    }
    let ns = parse_range(n).map_err(|e| usage(e.to_string()))?;
    if ns.first() == Some(&0) {
        return Err(usage("n must be positive"));
    }
    let verdicts = hookpoly::par::try_map_slice(&ns, |&n| {
        rr_claim_check(b, n, tol, ctx.prec(), ctx.cfg.default_tol)
    })?;
    let mut worst: Option<(f64, u64)> = None;
    for v in &verdicts {
        if v.roots.is_some() && worst.is_none_or(|(re, _)| v.max_re > re) {
            worst = Some((v.max_re, v.n));
        }
    }
    let pass = verdicts.iter().all(|v| v.pass);
    let results = verdicts
        .iter()
        .map(|v| Entry {
            n: v.n,
            pass: v.pass,
            max_re: if v.roots.is_some() {
                format!("{:e}", v.max_re)
            } else {
                "none".into()
            },
            max_re_nonzero: v.max_re_nonzero.map(|x| format!("{x:e}")),
            max_abs_im: format!("{:e}", v.max_abs_im),
            degree: v.polynomial.degree().unwrap_or(0),
        })
        .collect();
    ctx.emit_json(&Out {
        b,
        tol,
        pass,
        worst_re: worst.map_or_else(|| "none".into(), |(re, _)| format!("{re:e}")),
        worst_n: worst.map(|(_, n)| n),
        results,
    })?;
    Ok(if pass { 0 } else { EXIT_CHECK_FAILED })
}
