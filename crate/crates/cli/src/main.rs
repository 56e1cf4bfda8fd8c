//! Command line front end for `lswitt`.

use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lswitt::freelsa::{
    enumerate_multilinear_reduced, is_in_w, l_form, normal_form_with, RewriteStrategy,
};
use lswitt::lambda::{
    certify_nonidentity, chi_element, leading_f, reconstruct_word, reconstruct_word_rooted,
    specialize, Certification,
};
use lswitt::opid::{matrix_identity_decide, right_operator_check, Mode};
use lswitt::parse::{
    parse_assoc, parse_derivation, parse_element, parse_lambda_assignment, parse_lambda_monomial,
    parse_word,
};
use lswitt::skew::{e_of_n, minimal_skew_n, prop2_applies, skew_symmetrized_eval};
use lswitt::witt::{basis_up_to, find_counterexample, Class, Derivation};
use lswitt::{Error, VarSet, Word};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "lswitt",
    version,
    about = "Exact computations in the left-symmetric Witt algebra"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for parallel searches (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Full,
    Triangular,
    StronglyTriangular,
}

impl From<ClassArg> for Class {
    fn from(c: ClassArg) -> Class {
        match c {
            ClassArg::Full => Class::Full,
            ClassArg::Triangular => Class::Triangular,
            ClassArg::StronglyTriangular => Class::StronglyTriangular,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Decide,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    LeftmostInnermost,
    RightmostOutermost,
}

#[derive(Subcommand)]
enum Command {
    /// Product a . b of two derivations
    Mul {
        a: String,
        b: String,
        #[arg(long)]
        n: usize,
        /// Allow negative exponents
        #[arg(long)]
        laurent: bool,
    },
    /// Jacobian matrix of a derivation
    Jacobian {
        a: String,
        #[arg(long)]
        n: usize,
    },
    /// Homogeneous components by degree
    Grade {
        a: String,
        #[arg(long)]
        n: usize,
    },
    /// Strongest of full / triangular / strongly triangular containing a derivation
    Membership {
        a: String,
        #[arg(long)]
        n: usize,
    },
    /// Reduced normal form of an element of the free algebra
    Normalize {
        element: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::LeftmostInnermost)]
        strategy: StrategyArg,
    },
    /// L-form w1(w2(..(wm y_i))) of a special reduced word
    Lform { word: String },
    /// Multilinear reduced words of degree d
    EnumerateReduced {
        #[arg(long)]
        d: usize,
        /// Print the words, not just the count
        #[arg(long)]
        list: bool,
    },
    /// Is f(R_y1, .., R_ym) y = 0 an identity of the class?
    OpCheck {
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Full)]
        class: ClassArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Decide)]
        mode: ModeArg,
        /// Largest grading degree of basis derivations (x^a d_i has degree |a| - 1)
        #[arg(long, default_value_t = 2)]
        degree_bound: i64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Basis tuples to try before sampling
        #[arg(long, default_value_t = 10_000)]
        exhaustive_limit: usize,
    },
    /// Is f = 0 an identity of n x n matrices (full, upper or strictly upper triangular)?
    MatrixCheck {
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Full)]
        class: ClassArg,
    },
    /// Image of an element under y_i -> z_i
    Chi {
        element: String,
        #[arg(long)]
        n: usize,
    },
    /// Leading monomial of f^w for a special reduced multilinear word
    Leading {
        word: String,
        #[arg(long)]
        n: usize,
    },
    /// The word with a given leading monomial
    Reconstruct {
        monomial: String,
        #[arg(long)]
        n: usize,
        /// Rightmost letter, needed for the empty monomial
        #[arg(long)]
        root: Option<u32>,
    },
    /// Image of an element at an integer point, e.g. --s "l12=1, l13=0, l23=2"
    Specialize {
        element: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: String,
    },
    /// Certificate that a multilinear element is not an identity of strongly triangular derivations
    Certify {
        #[arg(long)]
        element: String,
        /// Number of variables (default: degree of the element)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Alternating sums S_N^w on sampled distinct basis derivations
    SkewCheck {
        #[arg(long)]
        n: usize,
        /// Size of the alternating block (default: least N with e(N) >= t)
        #[arg(long = "N")]
        big_n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        t: u64,
        /// Word on y1..y(N+t) (default: left-normed)
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest grading degree of basis derivations (x^a d_i has degree |a| - 1)
        #[arg(long, default_value_t = 2)]
        degree_bound: i64,
    },
    /// Least N with e(N) >= t
    #[command(name = "min-N")]
    MinN {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        t: u64,
    },
    /// Search basis substitutions for a counterexample to an identity
    IdentityCheck {
        #[arg(long)]
        element: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::Full)]
        class: ClassArg,
        /// Largest grading degree of basis derivations (x^a d_i has degree |a| - 1)
        #[arg(long, default_value_t = 2)]
        degree_bound: i64,
    },
}

/// A finished command: the JSON report, its text rendering and the exit code.
struct Report {
    json: Value,
    text: String,
    violated: bool,
}

impl Report {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Report {
            json,
            text: text.into(),
            violated: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok(mut report) => {
            match cli.format {
                Format::Json => {
                    report
                        .json
                        .as_object_mut()
                        .expect("reports are objects")
                        .insert("schema".into(), json!(1));
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report.json).expect("serializable")
                    );
                }
                Format::Text => println!("{}", report.text.trim_end()),
            }
            ExitCode::from(u8::from(report.violated))
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn der(src: &str, n: usize) -> Result<Derivation> {
    parse_derivation(src, n, false).with_context(|| format!("cannot read derivation {src:?}"))
}

fn run(cmd: &Command) -> Result<Report> {
    Ok(match cmd {
        Command::Mul { a, b, n, laurent } => {
            let a = parse_derivation(a, *n, *laurent)?;
            let b = parse_derivation(b, *n, *laurent)?;
            let p = a.ls_mul(&b)?;
            Report::ok(
                json!({"command": "mul", "a": a.to_string(), "b": b.to_string(), "product": p.to_string()}),
                p.to_string(),
            )
        }
        Command::Jacobian { a, n } => {
            let a = der(a, *n)?;
            let j = a.jacobian();
            Report::ok(
                json!({"command": "jacobian", "derivation": a.to_string(), "jacobian": j.rows_as_strings()}),
                j.to_string(),
            )
        }
        Command::Grade { a, n } => {
            let a = der(a, *n)?;
            let parts = a.degree_decompose();
            let comps: BTreeMap<String, String> = parts
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            let text = parts
                .iter()
                .map(|(k, v)| format!("L_{k}: {v}"))
                .collect::<Vec<_>>()
                .join("\n");
            Report::ok(
                json!({"command": "grade", "derivation": a.to_string(), "components": comps, "homogeneous_degree": a.homogeneous_degree()}),
                if text.is_empty() { "0".into() } else { text },
            )
        }
        Command::Membership { a, n } => {
            let a = der(a, *n)?;
            let c = a.membership();
            assert_eq!(
                c,
                a.membership_by_jacobian(),
                "support and Jacobian tests must agree"
            );
            Report::ok(
                json!({"command": "membership", "derivation": a.to_string(), "class": c.name()}),
                c.name(),
            )
        }
        Command::Normalize { element, strategy } => {
            let g = parse_element(element)?;
            let strategy = match strategy {
                StrategyArg::LeftmostInnermost => RewriteStrategy::LeftmostInnermost,
                StrategyArg::RightmostOutermost => RewriteStrategy::RightmostOutermost,
            };
            let (nf, steps) = normal_form_with(&g, strategy);
            let terms: Vec<Value> = nf
                .terms()
                .map(|(w, c)| json!({"word": w.to_string(), "coefficient": c}))
                .collect();
            Report::ok(
                json!({"command": "normalize", "input": g.to_string(), "normal_form": nf.to_string(), "terms": terms, "steps": steps}),
                nf.to_string(),
            )
        }
        Command::Lform { word } => {
            let w = parse_word(word)?;
            let (factors, tail) = l_form(&w)?;
            let fs: Vec<String> = factors.iter().map(Word::to_string).collect();
            Report::ok(
                json!({"command": "lform", "word": w.to_string(), "factors": fs, "tail": format!("y{tail}"), "in_w": is_in_w(&w)}),
                format!("factors: {}\ntail: y{tail}", fs.join(", ")),
            )
        }
        Command::EnumerateReduced { d, list } => {
            if *d == 0 {
                bail!(Error::Invalid("degree must be positive".into()));
            }
            let ws = enumerate_multilinear_reduced(*d);
            let words: Vec<String> = ws.iter().map(Word::to_string).collect();
            let mut j = json!({"command": "enumerate-reduced", "d": d, "count": ws.len()});
            let mut text = format!("{}", ws.len());
            if *list {
                j["words"] = json!(words);
                text = words.join("\n") + &format!("\n{} words", ws.len());
            }
            Report::ok(j, text)
        }
        Command::OpCheck {
            f,
            n,
            class,
            mode,
            degree_bound,
            samples,
            seed,
            exhaustive_limit,
        } => {
            let f = parse_assoc(f)?;
            let mode = match mode {
                ModeArg::Decide => Mode::Decide,
                ModeArg::Sample => Mode::Sample {
                    degree_bound: *degree_bound,
                    samples: *samples,
                    seed: *seed,
                    exhaustive_limit: *exhaustive_limit,
                },
            };
            let v = right_operator_check(&f, *n, (*class).into(), mode)?;
            let witness = v.witness.as_ref().map(|w| {
                json!({
                    "args": w.args.iter().map(Derivation::to_string).collect::<Vec<_>>(),
                    "c": w.c.to_string(),
                    "value": w.value.to_string(),
                })
            });
            let text = match &v.witness {
                None => format!("identity ({} tuples checked)", v.tuples_checked),
                Some(w) => format!(
                    "not an identity\nargs: {}\nc: {}\nvalue: {}",
                    w.args
                        .iter()
                        .map(Derivation::to_string)
                        .collect::<Vec<_>>()
                        .join("; "),
                    w.c,
                    w.value
                ),
            };
            Report {
                json: json!({
                    "command": "op-check", "f": f.to_string(), "n": n, "class": Class::from(*class).name(),
                    "mode": serde_json::to_value(v.mode)?, "identity": v.identity, "witness": witness,
                    "tuples_checked": v.tuples_checked,
                }),
                text,
                violated: !v.identity,
            }
        }
        Command::MatrixCheck { f, n, class } => {
            let f = parse_assoc(f)?;
            let v = matrix_identity_decide(&f, *n, (*class).into())?;
            let text = if v.identity {
                "identity".to_string()
            } else {
                format!("not an identity\nwitness: {:?}", v.witness)
            };
            Report {
                json: json!({
                    "command": "matrix-check", "f": f.to_string(), "n": n, "class": Class::from(*class).name(),
                    "identity": v.identity, "witness": v.witness, "value": v.value,
                }),
                text,
                violated: !v.identity,
            }
        }
        Command::Chi { element, n } => {
            let g = parse_element(element)?;
            let img = chi_element(&g, *n)?;
            Report::ok(
                json!({"command": "chi", "element": g.to_string(), "n": n, "image": img.to_string()}),
                img.to_string(),
            )
        }
        Command::Leading { word, n } => {
            let w = parse_word(word)?;
            let m = leading_f(&w, *n)?;
            let s = m.fmt_with(&VarSet::lambda(*n)).to_string();
            Report::ok(
                json!({"command": "leading", "word": w.to_string(), "n": n, "leading_monomial": s}),
                s,
            )
        }
        Command::Reconstruct { monomial, n, root } => {
            let m = parse_lambda_monomial(monomial, *n)?;
            let w = match root {
                Some(r) => reconstruct_word_rooted(&m, *n, *r)?,
                None => reconstruct_word(&m, *n)?,
            };
            Report::ok(
                json!({"command": "reconstruct", "monomial": m.fmt_with(&VarSet::lambda(*n)).to_string(), "n": n, "word": w.to_string()}),
                w.to_string(),
            )
        }
        Command::Specialize { element, n, s } => {
            let g = parse_element(element)?;
            let point = parse_lambda_assignment(s, *n)?;
            let img = specialize(&chi_element(&g, *n)?, &point)?;
            let vars = VarSet::lambda(*n);
            let s_map: BTreeMap<String, i64> = point
                .iter()
                .enumerate()
                .map(|(k, &v)| (vars.var_name(k), v))
                .collect();
            Report::ok(
                json!({"command": "specialize", "element": g.to_string(), "n": n, "s": s_map, "value": img.to_string()}),
                img.to_string(),
            )
        }
        Command::Certify { element, n } => {
            let g = parse_element(element)?;
            let n = n.unwrap_or(g.letters().len());
            match certify_nonidentity(&g, n)? {
                Certification::TrivialIdentity => Report::ok(
                    json!({"command": "certify", "input_element": g.to_string(), "trivial_identity": true}),
                    "zero in the free algebra: a consequence of left-symmetry",
                ),
                Certification::Certificate(c) => {
                    let mut j = serde_json::to_value(&*c)?;
                    j["command"] = json!("certify");
                    j["trivial_identity"] = json!(false);
                    let text = format!(
                        "sigma: {:?}\ns: {:?}\nsubstitutions: {}\nvalue: {}\nvalidated: {}",
                        c.sigma,
                        c.s,
                        c.substitutions.join("; "),
                        c.value,
                        c.validated
                    );
                    Report::ok(j, text)
                }
            }
        }
        Command::SkewCheck {
            n,
            big_n,
            t,
            word,
            samples,
            seed,
            degree_bound,
        } => skew_check(
            *n,
            *big_n,
            *t,
            word.as_deref(),
            *samples,
            *seed,
            *degree_bound,
        )?,
        Command::MinN { n, t } => {
            if *n == 0 {
                bail!(Error::Invalid("n must be positive".into()));
            }
            let big_n = minimal_skew_n(*n, *t);
            Report::ok(
                json!({"command": "min-N", "n": n, "t": t, "N": big_n.to_string(), "e_N": e_of_n(*n, big_n).to_string()}),
                big_n.to_string(),
            )
        }
        Command::IdentityCheck {
            element,
            n,
            class,
            degree_bound,
        } => {
            let g = parse_element(element)?;
            let found = find_counterexample(&g, *n, (*class).into(), *degree_bound)?;
            let (json_w, text) = match &found {
                None => (Value::Null, "no counterexample".to_string()),
                Some((letters, args, v)) => {
                    let asg: BTreeMap<String, String> = letters
                        .iter()
                        .zip(args)
                        .map(|(l, a)| (format!("y{l}"), a.to_string()))
                        .collect();
                    (
                        json!({"assignment": asg, "value": v.to_string()}),
                        format!("counterexample: {asg:?}\nvalue: {v}"),
                    )
                }
            };
            Report {
                json: json!({
                    "command": "identity-check", "element": g.to_string(), "n": n, "class": Class::from(*class).name(),
                    "degree_bound": degree_bound, "identity_on_basis": found.is_none(), "witness": json_w,
                }),
                text,
                violated: found.is_some(),
            }
        }
    })
}

fn skew_check(
    n: usize,
    big_n: Option<usize>,
    t: u64,
    word: Option<&str>,
    samples: usize,
    seed: u64,
    degree_bound: i64,
) -> Result<Report> {
    if n == 0 {
        bail!(Error::Invalid("n must be positive".into()));
    }
    let big_n = match big_n {
        Some(k) => k,
        None => usize::try_from(minimal_skew_n(n, t)).map_err(|_| anyhow!("N out of range"))?,
    };
    let total = big_n + t as usize;
    let w = match word {
        Some(s) => parse_word(s)?,
        None => Word::left_normed(&(1..=total as u32).collect::<Vec<_>>()),
    };
    let basis = basis_up_to(n, degree_bound, Class::Full);
    if basis.len() < big_n {
        bail!(Error::Invalid(format!(
            "only {} basis derivations of degree <= {degree_bound}; raise --degree-bound",
            basis.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::with_capacity(samples);
    let mut nonzero = 0;
    for k in 0..samples {
        let args: Vec<Derivation> = basis.choose_multiple(&mut rng, big_n).cloned().collect();
        let extra: Vec<Derivation> = (0..t)
            .map(|_| basis.choose(&mut rng).unwrap().clone())
            .collect();
        let v = skew_symmetrized_eval(&w, &args, &extra)?;
        nonzero += usize::from(!v.is_zero());
        results.push(json!({
            "sample": k,
            "args": args.iter().map(Derivation::to_string).collect::<Vec<_>>(),
            "extra": extra.iter().map(Derivation::to_string).collect::<Vec<_>>(),
            "zero": v.is_zero(),
            "value": v.to_string(),
        }));
    }
    let applies = prop2_applies(n, big_n as u128, t);
    let text = format!(
        "N = {big_n}, e(N) = {}, threshold met: {applies}\n{nonzero} of {samples} samples nonzero",
        e_of_n(n, big_n as u128)
    );
    Ok(Report {
        json: json!({
            "command": "skew-check", "n": n, "N": big_n, "t": t, "word": w.to_string(),
            "e_N": e_of_n(n, big_n as u128).to_string(), "prop2_applies": applies,
            "samples": samples, "seed": seed, "degree_bound": degree_bound,
            "nonzero": nonzero, "results": results,
        }),
        text,
        violated: nonzero > 0,
    })
}
