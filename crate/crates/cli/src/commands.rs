//! One handler per subcommand. Handlers only parse, call the library and emit.

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use num_bigint::BigUint;
use quadrex::{
    analytic, arith, density, forms, progressions, randomness, reciprocity, roots, symbols, weil,
    zkp, APFamilySpec, ClassSplit, Density, Error, MonicPoly, ScanMode, StandardTuple, WeilPoly,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{self, emit, join, Format};
use crate::{Cli, Command};

pub fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    let f = g.format();
    match &cli.command {
        Command::Symbol(a) => symbol(a, f),
        Command::Sqrt(a) => sqrt(a, f),
        Command::Solve(a) => solve(a, f),
        Command::Xset(a) => xset(a, f, g.prime_bound),
        Command::Density(a) => density(a, f, g.prime_bound),
        Command::Forms(a) => forms(a, f, g.terms),
        Command::Excess(a) => excess(a, f, g.terms),
        Command::GaussSum(a) => gauss_sum(a, f),
        Command::Weil(a) => weil(a, f),
        Command::Ap(a) => ap(a, f, g.prime_bound),
        Command::Clt(a) => clt(a, f),
        Command::Zkp(a) => zkp(a, f, g.seed),
    }
}

fn parse_sign(s: &str) -> std::result::Result<i8, String> {
    match s {
        "+" | "1" | "+1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(format!("expected +1 or -1, got {s:?}")),
    }
}

// ---------------------------------------------------------------- symbol

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolMethod {
    /// Euler's criterion.
    Euler,
    /// Gauss's lemma.
    Gauss,
    /// Table of squares.
    Table,
    /// Division algorithm with reciprocity; Jacobi symbol for odd composite N.
    Fast,
    /// Jacobi symbol through factorization of the modulus.
    Jacobi,
}

#[derive(Debug, Args)]
pub struct SymbolArgs {
    #[arg(allow_negative_numbers = true)]
    pub a: i64,
    pub n: u64,
    /// Shorthand for `--method fast`.
    #[arg(long, conflicts_with = "method")]
    pub fast: bool,
    #[arg(long, value_enum, default_value_t = SymbolMethod::Fast)]
    pub method: SymbolMethod,
    /// Print the division sequence and exponents instead of the bare value.
    #[arg(long)]
    pub trace: bool,
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p).into());
    }
    Ok(())
}

fn symbol(args: &SymbolArgs, f: Format) -> Result<()> {
    let method = if args.fast {
        SymbolMethod::Fast
    } else {
        args.method
    };
    let (a, n) = (args.a, args.n);
    let mut detail = serde_json::Map::new();
    let value = match method {
        SymbolMethod::Euler => {
            require_odd_prime(n)?;
            symbols::legendre_euler(a, n)
        }
        SymbolMethod::Gauss => {
            let (v, mu) = symbols::legendre_gauss_lemma(a, n)?;
            detail.insert("mu".into(), json!(mu));
            v
        }
        SymbolMethod::Table => symbols::residue_table(n)?.symbol(a),
        SymbolMethod::Fast => {
            let v = symbols::jacobi_symbol_fast(a, n)?;
            let r = (a as i128).rem_euclid(n as i128) as u64;
            if args.trace && v != 0 && n > 1 {
                let s = r.trailing_zeros();
                let odd = r >> s;
                detail.insert("two_power".into(), json!(s));
                detail.insert("odd_part".into(), json!(odd));
                if odd > 1 {
                    detail.insert(
                        "trace".into(),
                        serde_json::to_value(symbols::jacobi_fast(n, odd)?)?,
                    );
                }
            }
            v
        }
        SymbolMethod::Jacobi => symbols::jacobi(a, n as i64)?,
    };
    match f {
        Format::Json if !args.trace => output::json(&value),
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("a".into(), json!(a));
            obj.insert("n".into(), json!(n));
            obj.insert("value".into(), json!(value));
            obj.extend(detail);
            output::json(&obj)
        }
        Format::Csv => output::csv(
            &["a", "n", "value"],
            [vec![a.to_string(), n.to_string(), value.to_string()]],
        ),
    }
}

// ---------------------------------------------------------------- sqrt / solve

#[derive(Debug, Args)]
pub struct SqrtArgs {
    #[arg(allow_negative_numbers = true)]
    pub z: i64,
    pub n: u64,
}

#[derive(Serialize)]
struct Roots<'a> {
    modulus: u64,
    roots: &'a [u64],
}

fn emit_roots(f: Format, modulus: u64, roots: &[u64]) -> Result<()> {
    emit(f, &Roots { modulus, roots }, &["modulus", "root"], || {
        roots
            .iter()
            .map(|r| vec![modulus.to_string(), r.to_string()])
            .collect()
    })
}

fn sqrt(args: &SqrtArgs, f: Format) -> Result<()> {
    let r = roots::sqrt_mod_composite(args.z, args.n)?;
    emit_roots(f, args.n, &r)
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(allow_negative_numbers = true)]
    pub a: i64,
    #[arg(allow_negative_numbers = true)]
    pub b: i64,
    #[arg(allow_negative_numbers = true)]
    pub c: i64,
    pub m: u64,
}

fn solve(args: &SolveArgs, f: Format) -> Result<()> {
    let r = roots::solve_quadratic_mod_m(args.a, args.b, args.c, args.m)?;
    emit_roots(f, args.m, &r)
}

// ---------------------------------------------------------------- xset

#[derive(Debug, Args)]
pub struct XsetArgs {
    #[arg(allow_negative_numbers = true)]
    pub d: i64,
    /// Use the closed forms for `d` in {-1, 2} or an odd prime.
    #[arg(long)]
    pub fundamental: bool,
    /// Check both sets against direct evaluation for all primes up to --prime-bound.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Serialize)]
struct XsetOut {
    d: i64,
    modulus: u64,
    plus: Vec<u64>,
    minus: Vec<u64>,
    excluded_primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<serde_json::Value>,
}

fn xset(args: &XsetArgs, f: Format, bound: u64) -> Result<()> {
    let split: ClassSplit = if args.fundamental {
        reciprocity::fundamental_problem(args.d)?
    } else {
        reciprocity::basic_problem(args.d)?
    };
    let verify = if args.verify {
        let plus = reciprocity::verify_class_set(&split.plus, args.d, 1, bound)?;
        let minus = reciprocity::verify_class_set(&split.minus, args.d, -1, bound)?;
        Some(json!({ "bound": bound, "plus": plus, "minus": minus }))
    } else {
        None
    };
    let out = XsetOut {
        d: args.d,
        modulus: split.plus.modulus,
        plus: split.plus.classes.clone(),
        minus: split.minus.classes.clone(),
        excluded_primes: split.plus.excluded_primes.clone(),
        verify,
    };
    emit(f, &out, &["d", "modulus", "sign", "class"], || {
        let row = |sign: &str, c: &u64| {
            vec![
                out.d.to_string(),
                out.modulus.to_string(),
                sign.into(),
                c.to_string(),
            ]
        };
        out.plus
            .iter()
            .map(|c| row("+", c))
            .chain(out.minus.iter().map(|c| row("-", c)))
            .collect()
    })
}

// ---------------------------------------------------------------- density

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(required = true)]
    pub set: Vec<u64>,
    /// Count primes for which every element is a non-residue.
    #[arg(long, conflicts_with = "pattern")]
    pub minus: bool,
    /// Prescribed symbols, one per element, comma separated (+1/-1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_sign)]
    pub pattern: Option<Vec<i8>>,
}

#[derive(Serialize)]
struct DensityOut {
    set: Vec<u64>,
    mode: &'static str,
    density: Density,
    prime_bound: u64,
    primes: usize,
    matches: usize,
    theoretical: f64,
    empirical: f64,
    abs_error: f64,
    /// Three binomial standard deviations at the theoretical value.
    tolerance: f64,
}

fn density(args: &DensityArgs, f: Format, bound: u64) -> Result<()> {
    let s = &args.set;
    let (mode, name, d) = match (&args.pattern, args.minus) {
        (Some(eps), _) => (
            ScanMode::Pattern(eps.clone()),
            "pattern",
            density::density_pattern(s, eps)?,
        ),
        (None, true) => (
            ScanMode::AllMinus,
            "all_minus",
            density::density_nonresidue_set(s)?,
        ),
        (None, false) => (
            ScanMode::AllPlus,
            "all_plus",
            density::density_residue_set(s)?,
        ),
    };
    let emp = density::empirical_density(s, &mode, bound)?;
    let v = d.value();
    let out = DensityOut {
        set: s.clone(),
        mode: name,
        density: d,
        prime_bound: bound,
        primes: emp.primes,
        matches: emp.matches,
        theoretical: v,
        empirical: emp.ratio,
        abs_error: (emp.ratio - v).abs(),
        tolerance: 3.0 * (v * (1.0 - v) / emp.primes.max(1) as f64).sqrt(),
    };
    emit(
        f,
        &out,
        &["prime_bound", "theoretical", "empirical", "abs_error"],
        || {
            vec![vec![
                bound.to_string(),
                out.theoretical.to_string(),
                out.empirical.to_string(),
                out.abs_error.to_string(),
            ]]
        },
    )
}

// ---------------------------------------------------------------- forms

#[derive(Debug, Args)]
pub struct FormsArgs {
    /// Fundamental discriminants.
    #[arg(required = true, allow_negative_numbers = true)]
    pub d: Vec<i64>,
}

#[derive(Serialize)]
struct FormsRow {
    d: i64,
    h: u64,
    w: u32,
    method: forms::ClassNumberMethod,
    l_value: f64,
    error_bound: f64,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced_forms: Option<Vec<quadrex::QForm>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pell: Option<quadrex::PellSolution>,
}

fn forms(args: &FormsArgs, f: Format, terms: u64) -> Result<()> {
    let rows = args
        .d
        .iter()
        .map(|&d| {
            let h = forms::class_number(d, terms)?;
            let (w, reduced_forms, pell) = if d < 0 {
                (
                    forms::automorph_count(d)?,
                    Some(forms::reduced_forms(d)?),
                    None,
                )
            } else {
                (2, None, Some(forms::pell_min(d as u64)?))
            };
            Ok(FormsRow {
                d,
                h: h.h,
                w,
                method: h.method,
                l_value: h.l_value,
                error_bound: h.error_bound,
                residual: h.residual,
                reduced_forms,
                pell,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match f {
        Format::Json => rows.iter().try_for_each(output::json),
        Format::Csv => output::csv(
            &["d", "h", "w", "l_value", "residual"],
            rows.iter().map(|r| {
                vec![
                    r.d.to_string(),
                    r.h.to_string(),
                    r.w.to_string(),
                    r.l_value.to_string(),
                    r.residual.to_string(),
                ]
            }),
        ),
    }
}

// ---------------------------------------------------------------- excess

#[derive(Debug, Args)]
pub struct ExcessArgs {
    /// A prime above 3.
    pub p: u64,
    /// Only print the excesses over the `den` equal parts of (0, p).
    #[arg(long)]
    pub den: Option<i64>,
}

fn excess(args: &ExcessArgs, f: Format, terms: u64) -> Result<()> {
    let p = args.p;
    if let Some(den) = args.den {
        if den < 1 {
            bail!("--den must be positive");
        }
        let parts = analytic::excess_partition(p, den)?;
        return emit(
            f,
            &json!({ "p": p, "den": den, "excess": parts }),
            &["p", "den", "part", "excess"],
            || {
                parts
                    .iter()
                    .enumerate()
                    .map(|(j, q)| {
                        vec![
                            p.to_string(),
                            den.to_string(),
                            (j + 1).to_string(),
                            q.to_string(),
                        ]
                    })
                    .collect()
            },
        );
    }
    let signs = analytic::verify_excess_signs(p)?;
    let via_l = analytic::excess_via_l(p, terms)?;
    let class = analytic::class_number_excess(p)?;
    let out = json!({
        "p": p,
        "signs": signs,
        "l_identities": via_l,
        "class_number_identities": class,
    });
    emit(f, &out, &["identity", "exact", "formula", "holds"], || {
        via_l
            .iter()
            .map(|c| {
                vec![
                    c.identity.into(),
                    c.exact.to_string(),
                    c.formula.to_string(),
                    c.holds.to_string(),
                ]
            })
            .chain(class.iter().map(|c| {
                vec![
                    c.identity.into(),
                    c.excess.to_string(),
                    c.class_number.to_string(),
                    c.holds.to_string(),
                ]
            }))
            .collect()
    })
}

// ---------------------------------------------------------------- gauss-sum

#[derive(Debug, Args)]
pub struct GaussSumArgs {
    pub p: u64,
    #[arg(default_value_t = 1, allow_negative_numbers = true)]
    pub n: i64,
}

#[derive(Serialize)]
struct GaussOut {
    p: u64,
    n: i64,
    re: f64,
    im: f64,
    /// `chi_p(n) sqrt(p)` on the real axis for `p = 1 mod 4`, the imaginary axis otherwise.
    expected_re: f64,
    expected_im: f64,
    abs_error: f64,
}

fn gauss_sum(args: &GaussSumArgs, f: Format) -> Result<()> {
    let (p, n) = (args.p, args.n);
    let g = analytic::gauss_sum(n, p)?;
    let mag = symbols::legendre_fast(n, p) as f64 * (p as f64).sqrt();
    let (expected_re, expected_im) = if p % 4 == 1 { (mag, 0.0) } else { (0.0, mag) };
    let out = GaussOut {
        p,
        n,
        re: g.re,
        im: g.im,
        expected_re,
        expected_im,
        abs_error: ((g.re - expected_re).powi(2) + (g.im - expected_im).powi(2)).sqrt(),
    };
    emit(
        f,
        &out,
        &[
            "p",
            "n",
            "re",
            "im",
            "expected_re",
            "expected_im",
            "abs_error",
        ],
        || {
            vec![[
                p as f64,
                n as f64,
                out.re,
                out.im,
                expected_re,
                expected_im,
                out.abs_error,
            ]
            .iter()
            .enumerate()
            .map(|(i, v)| if i < 2 { format!("{v}") } else { v.to_string() })
            .collect()]
        },
    )
}

// ---------------------------------------------------------------- weil

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("poly").required(true).args(["roots", "coeffs"]))]
pub struct WeilArgs {
    pub p: u64,
    /// Distinct roots of a split polynomial.
    pub roots: Vec<u64>,
    /// Monic coefficients c_0,...,c_{d-1} of any square-free polynomial.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub coeffs: Option<Vec<i64>>,
    /// Also report the partial sum over 0..N (split polynomials only).
    #[arg(long)]
    pub n: Option<u64>,
}

fn weil(args: &WeilArgs, f: Format) -> Result<()> {
    let value = match &args.coeffs {
        Some(c) => {
            if args.n.is_some() {
                bail!("--n needs a polynomial given by its roots");
            }
            let m = MonicPoly::new(args.p, c)?;
            let sum = m.complete_sum();
            json!({
                "p": m.p,
                "degree": m.degree(),
                "coeffs": m.coeffs,
                "complete_sum": sum,
                "complete_bound": m.complete_bound(),
                "complete_holds": (sum.abs() as f64) < m.complete_bound(),
                "point_count": m.point_count(),
            })
        }
        None => {
            let w = WeilPoly::new(args.p, args.roots.clone())?;
            let mut v = serde_json::to_value(weil::weil_report(&w))?;
            v["roots"] = json!(w.roots);
            if let Some(n) = args.n {
                v["n"] = json!(n);
                v["incomplete_sum"] = json!(weil::incomplete_weil_sum(&w, n)?);
            }
            v
        }
    };
    emit(
        f,
        &value,
        &[
            "p",
            "degree",
            "complete_sum",
            "complete_bound",
            "point_count",
        ],
        || {
            vec![[
                "p",
                "degree",
                "complete_sum",
                "complete_bound",
                "point_count",
            ]
            .iter()
            .map(|k| value[*k].to_string())
            .collect()]
        },
    )
}

// ---------------------------------------------------------------- ap

#[derive(Debug, Args)]
pub struct ApArgs {
    #[command(subcommand)]
    pub command: ApCommand,
}

#[derive(Debug, Deserialize)]
struct SpecInput {
    b: Vec<u64>,
    s: Vec<Vec<u64>>,
}

#[derive(Debug, Deserialize)]
struct TupleInput {
    a: Vec<u64>,
    b: Vec<u64>,
}

fn parse_spec(text: &str) -> Result<APFamilySpec> {
    let i: SpecInput = serde_json::from_str(text)
        .context("--family must be {\"b\": [...], \"s\": [[...], ...]}")?;
    Ok(APFamilySpec::new(i.b, i.s)?)
}

fn parse_tuple(text: &str) -> Result<StandardTuple> {
    let i: TupleInput =
        serde_json::from_str(text).context("--tuple must be {\"a\": [...], \"b\": [...]}")?;
    Ok(StandardTuple::new(i.a, i.b)?)
}

#[derive(Debug, Subcommand)]
pub enum ApCommand {
    /// Overlap parameters of a progression family.
    Params {
        /// JSON object {"b": [...], "s": [[...], ...]}.
        #[arg(long)]
        family: String,
    },
    /// q_+ and q_- with the predicted count at the given primes.
    Count {
        #[arg(long)]
        family: String,
        #[arg(required = true)]
        primes: Vec<u64>,
    },
    /// Like `count`, over the first COUNT primes from FROM on (parallel).
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        from: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Quotient diagram of an admissible tuple.
    Diagram {
        /// JSON object {"a": [...], "b": [...]}.
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        s: u64,
    },
    /// Density of primes with positive signature, with a scan to --prime-bound.
    Density {
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        s: u64,
    },
    /// Tuple with prescribed quotient differences D and multipliers T.
    Generate {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        a1: u64,
        #[arg(long, default_value_t = 1)]
        b1: u64,
    },
    /// Translates of the union of progressions i*b_j carrying a symbol pattern.
    Patterns {
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        #[arg(long)]
        s: u64,
        /// One sign per offset, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_sign, required = true)]
        eps: Vec<i8>,
        p: u64,
    },
}

#[derive(Serialize)]
struct CountRow {
    p: u64,
    class: progressions::PrimeClass,
    signature: Vec<i8>,
    q_plus: u64,
    q_minus: u64,
    predicted: f64,
}

fn count_rows(spec: &APFamilySpec, primes: &[u64]) -> Result<Vec<CountRow>> {
    let params = progressions::compute_parameters(spec)?;
    for &p in primes {
        require_odd_prime(p)?;
    }
    Ok(primes
        .par_iter()
        .map(|&p| CountRow {
            p,
            class: progressions::classify(p, spec, &params),
            signature: progressions::signature(p, spec, &params),
            q_plus: progressions::count_q_epsilon(p, spec, 1),
            q_minus: progressions::count_q_epsilon(p, spec, -1),
            predicted: params.predicted_count(p),
        })
        .collect())
}

fn emit_count_rows(f: Format, rows: &[CountRow]) -> Result<()> {
    match f {
        Format::Json => rows.iter().try_for_each(output::json),
        Format::Csv => output::csv(
            &["p", "class", "signature", "q_plus", "q_minus", "predicted"],
            rows.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    serde_json::to_value(r.class)
                        .map(|v| v.as_str().unwrap_or_default().to_string())
                        .unwrap_or_default(),
                    join(&r.signature),
                    r.q_plus.to_string(),
                    r.q_minus.to_string(),
                    r.predicted.to_string(),
                ]
            }),
        ),
    }
}

fn ap(args: &ApArgs, f: Format, bound: u64) -> Result<()> {
    match &args.command {
        ApCommand::Params { family } => {
            let spec = parse_spec(family)?;
            let params = progressions::compute_parameters(&spec)?;
            emit(
                f,
                &params,
                &["alpha", "b_max", "e", "union_size", "k_max", "lambda"],
                || {
                    let sets =
                        |v: &[Vec<usize>]| v.iter().map(|k| join(k)).collect::<Vec<_>>().join("|");
                    vec![vec![
                        params.alpha.to_string(),
                        params.b_max.to_string(),
                        params.e.to_string(),
                        params.union_size.to_string(),
                        sets(&params.k_max),
                        sets(&params.lambda),
                    ]]
                },
            )
        }
        ApCommand::Count { family, primes } => {
            emit_count_rows(f, &count_rows(&parse_spec(family)?, primes)?)
        }
        ApCommand::Sweep {
            family,
            from,
            count,
        } => {
            let spec = parse_spec(family)?;
            let mut primes = Vec::with_capacity(*count);
            let mut p = (*from).max(3);
            while primes.len() < *count {
                if arith::is_prime(p) {
                    primes.push(p);
                }
                p = p.checked_add(1).ok_or(Error::Overflow)?;
            }
            emit_count_rows(f, &count_rows(&spec, &primes)?)
        }
        ApCommand::Diagram { tuple, s } => {
            let d = progressions::quotient_diagram(&parse_tuple(tuple)?, *s)?;
            emit(f, &d, &["s", "e", "blocks", "lambda"], || {
                let sets =
                    |v: &[Vec<usize>]| v.iter().map(|k| join(k)).collect::<Vec<_>>().join("|");
                vec![vec![
                    d.s.to_string(),
                    d.e.to_string(),
                    sets(&d.blocks),
                    sets(&d.lambda),
                ]]
            })
        }
        ApCommand::Density { tuple, s } => {
            let r = progressions::pi_plus_density(&parse_tuple(tuple)?, *s, bound)?;
            emit(
                f,
                &r,
                &["prime_bound", "closed_form", "rank_density", "empirical"],
                || {
                    vec![vec![
                        bound.to_string(),
                        r.closed_form.to_string(),
                        r.rank_density.to_string(),
                        r.empirical.to_string(),
                    ]]
                },
            )
        }
        ApCommand::Generate { d, t, a1, b1 } => {
            let tuple = progressions::generate_tuple(d, t, (*a1, *b1))?;
            emit(f, &tuple, &["a", "b"], || {
                tuple
                    .a
                    .iter()
                    .zip(&tuple.b)
                    .map(|(a, b)| vec![a.to_string(), b.to_string()])
                    .collect()
            })
        }
        ApCommand::Patterns { b, s, eps, p } => {
            require_odd_prime(*p)?;
            let (c_eps, c_sigma) = progressions::count_patterns_ap_b(b, *s, *p, eps)?;
            let out = json!({
                "p": p,
                "offsets": progressions::ap_b_offsets(b, *s),
                "gamma": progressions::gamma(b, *s),
                "support_exponent": progressions::support_exponent(b, *s),
                "c_eps": c_eps,
                "c_sigma": c_sigma,
            });
            emit(f, &out, &["p", "gamma", "c_eps", "c_sigma"], || {
                vec![vec![
                    p.to_string(),
                    out["gamma"].to_string(),
                    c_eps.to_string(),
                    c_sigma.to_string(),
                ]]
            })
        }
    }
}

// ---------------------------------------------------------------- clt

#[derive(Debug, Args)]
pub struct CltArgs {
    pub p: u64,
    /// Window length; defaults to floor(ln(p)^2).
    #[arg(long)]
    pub h: Option<u64>,
    /// Highest moment order.
    #[arg(long, default_value_t = randomness::MAX_MOMENT)]
    pub moments: u32,
    /// Print the distribution of S_h instead of the moments.
    #[arg(long)]
    pub histogram: bool,
}

fn clt(args: &CltArgs, f: Format) -> Result<()> {
    let p = args.p;
    require_odd_prime(p)?;
    let h = args.h.unwrap_or_else(|| randomness::canonical_h(p));
    if args.histogram {
        let bins = randomness::histogram(p, h)?;
        return match f {
            Format::Json => output::json(&json!({ "p": p, "h": h, "bins": bins })),
            Format::Csv => output::csv(
                &["value", "empirical_mass", "normal_mass"],
                bins.iter().map(|b| {
                    vec![
                        b.value.to_string(),
                        b.empirical_mass.to_string(),
                        b.normal_mass.to_string(),
                    ]
                }),
            ),
        };
    }
    let m = randomness::empirical_moments(p, h, args.moments)?;
    let r_max = (args.moments / 2).min(h.saturating_sub(1).min(u32::MAX as u64) as u32);
    let checks = (1..=r_max)
        .map(|r| randomness::moment_bound_check(p, h, r))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let cdf = randomness::cdf_report(p, h, &randomness::uniform_grid(-3.0, 3.0, 601))?;
    let out = json!({ "p": p, "h": h, "moments": m, "bound_checks": checks, "cdf": cdf });
    emit(f, &out, &["r", "power_sum", "moment", "normal"], || {
        (0..m.moments.len())
            .map(|i| {
                vec![
                    (i + 1).to_string(),
                    m.power_sums[i].to_string(),
                    m.moments[i].to_string(),
                    m.normal[i].to_string(),
                ]
            })
            .collect()
    })
}

// ---------------------------------------------------------------- zkp

#[derive(Debug, Args)]
pub struct ZkpArgs {
    #[command(subcommand)]
    pub command: ZkpCommand,
}

#[derive(Debug, Args)]
pub struct ZkpCommon {
    #[arg(long, default_value_t = 30)]
    pub rounds: u32,
    /// Bits of each secret prime.
    #[arg(long, default_value_t = 32)]
    pub bits: u32,
    /// Decimal identifier embedded in the public value.
    #[arg(long, default_value = "1729")]
    pub ident: String,
    /// Run a prover that does not know the square root.
    #[arg(long)]
    pub impostor: bool,
}

#[derive(Debug, Subcommand)]
pub enum ZkpCommand {
    /// One session as a JSON-lines transcript: key, rounds, verdict.
    Demo(ZkpCommon),
    /// Acceptance rate over many independent sessions.
    Trials {
        #[command(flatten)]
        common: ZkpCommon,
        #[arg(long, default_value_t = 1000)]
        sessions: u64,
    },
}

/// Stream 0 generates the key; session `i` uses stream `i + 1`.
fn zkp_session(keys: &zkp::ZkpKeys, common: &ZkpCommon, seed: u64, index: u64) -> zkp::ZkpSession {
    let mut rng = zkp::session_rng(seed, index + 1);
    if common.impostor {
        zkp::impostor_session(&keys.public(), None, common.rounds, &mut rng)
    } else {
        zkp::honest_session(keys, common.rounds, &mut rng)
    }
}

fn zkp_keys(common: &ZkpCommon, seed: u64) -> Result<zkp::ZkpKeys> {
    let ident: BigUint = common
        .ident
        .parse()
        .context("--ident must be a decimal integer")?;
    Ok(zkp::keygen(
        common.bits,
        &ident,
        &mut zkp::session_rng(seed, 0),
    )?)
}

fn zkp(args: &ZkpArgs, f: Format, seed: u64) -> Result<()> {
    match &args.command {
        ZkpCommand::Demo(common) => {
            let keys = zkp_keys(common, seed)?;
            let session = zkp_session(&keys, common, seed, 0);
            match f {
                Format::Json => {
                    output::json(&json!({ "public": session.public }))?;
                    session.rounds.iter().try_for_each(output::json)?;
                    output::json(
                        &json!({ "status": session.status, "rounds": session.rounds.len() }),
                    )
                }
                Format::Csv => output::csv(
                    &["round", "x", "y", "b", "response", "ok"],
                    session.rounds.iter().map(|r| {
                        vec![
                            r.round.to_string(),
                            r.x.to_string(),
                            r.y.to_string(),
                            r.b.to_string(),
                            r.response.to_string(),
                            r.ok.to_string(),
                        ]
                    }),
                ),
            }
        }
        ZkpCommand::Trials { common, sessions } => {
            let keys = zkp_keys(common, seed)?;
            let accepted = (0..*sessions)
                .into_par_iter()
                .filter(|&i| zkp_session(&keys, common, seed, i).accepted())
                .count() as u64;
            let rate = accepted as f64 / (*sessions).max(1) as f64;
            let expected = if common.impostor {
                0.5f64.powi(common.rounds as i32)
            } else {
                1.0
            };
            let out = json!({
                "sessions": sessions,
                "rounds": common.rounds,
                "impostor": common.impostor,
                "accepted": accepted,
                "rate": rate,
                "expected": expected,
            });
            emit(
                f,
                &out,
                &[
                    "sessions", "rounds", "impostor", "accepted", "rate", "expected",
                ],
                || {
                    vec![vec![
                        sessions.to_string(),
                        common.rounds.to_string(),
                        common.impostor.to_string(),
                        accepted.to_string(),
                        rate.to_string(),
                        expected.to_string(),
                    ]]
                },
            )
        }
    }
}
