//! `fqalg`: command-line front end.

mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fqalg::algebra::{AlgebraSpec, DEFAULT_EXHAUSTIVE_THRESHOLD};
use fqalg::closure::{d_exact, DEFAULT_D_CAP};
use fqalg::counting::{
    count_charpoly, count_nilpotents, count_rank, count_units, exact_p_small, zeta_general,
    zeta_leading,
};
use fqalg::estimator::{
    best_estimate, estimate_conditional, estimate_e, pfg_report, v_eta, verify_suite, Check,
    EstimatorConfig, EtaInverse, Mode, DEFAULT_BUDGET, DEFAULT_LEVEL, SUITES,
};
use fqalg::gfield::{gf, FieldTower};
use fqalg::maxsub::{enumerate_maximal, kappa, m_min, m_n_counts, standard_reps};
use fqalg::parse::{expand_ranges, parse_field, parse_spec};
use fqalg::report::criteria_table;
use fqalg::sampler::Condition;
use fqalg::{Error, Rational, Result};
use output::{render, Doc, Format};

#[derive(Parser, Debug)]
#[command(
    name = "fqalg",
    version,
    about = "Random generation of finite algebras over finite fields"
)]
struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: u64,
    /// Confidence level of reported intervals.
    #[arg(long, global = true, default_value_t = DEFAULT_LEVEL)]
    ci: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest set enumerated element by element.
    #[arg(long, global = true, default_value_t = DEFAULT_EXHAUSTIVE_THRESHOLD)]
    exhaustive_threshold: u64,
    /// Closure-call budget for exhaustive probabilities.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads; 0 uses one per core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountKind {
    Units,
    Nilpotents,
    Charpoly,
    Rank,
    /// Closed-form `P(A)` for the small shapes that have one.
    PSmall,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Mc,
    Auto,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field tower data for `GF(q, m)`.
    Field { field: String },
    /// Exact element counts in `M(n,m,q)`.
    Count {
        spec: String,
        #[arg(long, value_enum)]
        what: CountKind,
        /// Polynomial over `F_{q^m}` for `--what charpoly`, e.g. `X^2+X+1`.
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        alpha: Option<u64>,
    },
    /// Subalgebra zeta function at `ε`.
    Zeta {
        spec: String,
        #[arg(long, default_value = "1")]
        eps: String,
        /// Also split off the leading term.
        #[arg(long)]
        leading: bool,
    },
    /// Maximal subalgebra classes and counts.
    Maxsub {
        spec: String,
        /// List every maximal subalgebra and check the class sizes.
        #[arg(long)]
        enumerate: bool,
    },
    /// Probability that `d` random elements generate.
    Prob {
        spec: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// `none`, `unit`, `nilpotent`, `rank:<α>` or `charpoly:<poly>`.
        #[arg(long, default_value = "none")]
        condition: String,
    },
    /// Expected number of random elements needed to generate.
    Expect { spec: String },
    /// Growth invariants and their inequalities.
    Pfg {
        spec: String,
        /// Also report `V_η`, the least `d` with `P(A, d) > 1/η`.
        #[arg(long)]
        eta: Option<String>,
    },
    /// Minimal number of generators.
    Dgen {
        spec: String,
        #[arg(long, default_value_t = DEFAULT_D_CAP)]
        cap: usize,
    },
    /// Runs an inequality suite on its default grid or on `--spec` values.
    Verify {
        suite: String,
        #[arg(long = "spec")]
        specs: Vec<String>,
    },
    /// Reproduction table.
    Report {
        #[arg(default_value = "paper-tables")]
        table: String,
    },
}

struct Run {
    cfg: EstimatorConfig,
    samples: u64,
    /// Set when an emitted check failed.
    failed: bool,
}

fn specs(text: &str) -> Result<Vec<AlgebraSpec>> {
    expand_ranges(text)?.iter().map(|s| parse_spec(s)).collect()
}

fn simple_shape(spec: &AlgebraSpec) -> Result<(u64, u64)> {
    let dec = spec.require_decomposition()?;
    if dec.r() != 1 || !dec.is_semisimple() {
        return Err(Error::invalid(format!(
            "{} is not of the form M(n,m,q)",
            spec.label()
        )));
    }
    let (n, m) = dec.shapes()[0];
    Ok((n as u64, m as u64))
}

fn parse_condition(spec: &AlgebraSpec, text: &str) -> Result<Condition> {
    let (head, arg) = text.split_once(':').unwrap_or((text, ""));
    match head {
        "none" => Ok(Condition::None),
        "unit" => Ok(Condition::Unit),
        "nilpotent" => Ok(Condition::Nilpotent),
        "rank" => arg
            .parse()
            .map(Condition::Rank)
            .map_err(|_| Error::invalid(format!("bad rank {arg:?}"))),
        "charpoly" => {
            let (_, m) = simple_shape(spec)?;
            let tower = FieldTower::for_q(spec.q(), m as u32)?;
            Ok(Condition::Charpoly(tower.top_field().parse_poly(arg)?))
        }
        _ => Err(Error::invalid(format!("unknown condition {text:?}"))),
    }
}

fn rational(text: &str) -> Result<Rational> {
    text.parse::<Rational>()
        .map_err(|_| Error::invalid(format!("bad rational {text:?}")))
}

fn check_doc(c: &Check, op: &str, seed: u64) -> Doc {
    let value = Value::String(if c.pass { "pass" } else { "fail" }.into());
    Doc::new(&c.spec, op, seed, &c.method, value).with_detail(c)
}

fn run(cli: &Cli, ctx: &mut Run) -> Result<Vec<Doc>> {
    let seed = ctx.cfg.seed;
    let mut docs = Vec::new();
    match &cli.command {
        Command::Field { field } => {
            let (p, e, m) = parse_field(field)?;
            let tower = FieldTower::new(p, e, m)?;
            let detail = json!({
                "p": p,
                "e": e,
                "m": m,
                "q": tower.q(),
                "h": tower.prime_field().format_poly(tower.h()),
                "g": tower.base_field().format_poly(tower.g()),
            });
            let order = (tower.q() as u64).pow(m);
            docs.push(
                Doc::new(field, "field", seed, "exact", json!(order.to_string()))
                    .with_detail(detail),
            );
        }
        Command::Count {
            spec,
            what,
            poly,
            alpha,
        } => {
            for a in specs(spec)? {
                let (n, m) = simple_shape(&a)?;
                let q = a.q();
                let t = q.pow(m as u32);
                let (value, formula) = match what {
                    CountKind::Units => {
                        let c = count_units(n, m, q);
                        (c.value.to_string(), c.formula)
                    }
                    CountKind::Nilpotents => {
                        let c = count_nilpotents(n, t);
                        (c.value.to_string(), c.formula)
                    }
                    CountKind::Charpoly => {
                        let text = poly
                            .as_deref()
                            .ok_or_else(|| Error::invalid("--poly is required"))?;
                        let f = gf(t)?.parse_poly(text)?;
                        if f.len() != n as usize + 1 {
                            return Err(Error::invalid(format!("polynomial must have degree {n}")));
                        }
                        let c = count_charpoly(t, &f)?;
                        (c.value.to_string(), c.formula)
                    }
                    CountKind::Rank => {
                        let c = count_rank(
                            n,
                            t,
                            alpha.ok_or_else(|| Error::invalid("--alpha is required"))?,
                        )?;
                        (c.value.to_string(), c.formula)
                    }
                    CountKind::PSmall => (exact_p_small(n, m, q)?.to_string(), "closed form"),
                };
                docs.push(
                    Doc::new(a.label(), "count", seed, "exact", json!(value))
                        .with_detail(json!({ "formula": formula })),
                );
            }
        }
        Command::Zeta { spec, eps, leading } => {
            let eps = rational(eps)?;
            for a in specs(spec)? {
                let z = zeta_general(&a, &eps)?;
                let value = match z.total.value() {
                    Some(v) => json!(v.to_string()),
                    None => json!(z.total.midpoint()),
                };
                let method = if z.total.is_exact() {
                    "exact"
                } else {
                    "enclosure"
                };
                let mut detail = json!({ "eps": eps.to_string(), "breakdown": z });
                if *leading {
                    let (lead, rem) = zeta_leading(&a, &eps)?;
                    detail["leading"] = json!(lead);
                    detail["remainder"] = json!(rem);
                }
                let mut doc = Doc::new(a.label(), "zeta", seed, method, value).with_detail(detail);
                doc.ci = Some([
                    fqalg::scalar::ratio_to_f64(&z.total.lo),
                    fqalg::scalar::ratio_to_f64(&z.total.hi),
                ]);
                docs.push(doc);
            }
        }
        Command::Maxsub { spec, enumerate } => {
            for a in specs(spec)? {
                let classes: Vec<_> = standard_reps(&a)?.iter().map(|c| c.to_doc()).collect();
                let table = m_n_counts(&a)?;
                let total: num_bigint::BigUint = table.values().sum();
                let mut detail = json!({
                    "classes": classes,
                    "m_n": table.iter().map(|(n, c)| (n.to_string(), c.to_string())).collect::<Vec<_>>(),
                });
                if let Ok(mi) = m_min(&a) {
                    detail["m"] = json!(mi.index.to_string());
                }
                if let Ok(k) = kappa(&a) {
                    detail["kappa"] = json!(k.to_string());
                }
                if *enumerate {
                    let all = enumerate_maximal(&a)?;
                    detail["enumerated"] = json!(all.len());
                    detail["subalgebras"] = json!(all
                        .iter()
                        .map(|(c, s)| json!({ "kind": c.kind.to_string(), "basis": s.basis() }))
                        .collect::<Vec<_>>());
                }
                docs.push(
                    Doc::new(a.label(), "maxsub", seed, "exact", json!(total.to_string()))
                        .with_detail(detail),
                );
            }
        }
        Command::Prob {
            spec,
            d,
            mode,
            condition,
        } => {
            for a in specs(spec)? {
                let cond = parse_condition(&a, condition)?;
                let est = match mode {
                    ModeArg::Exhaustive => {
                        estimate_conditional(&a, &cond, *d, Mode::Exhaustive, &ctx.cfg)?
                    }
                    ModeArg::Mc => estimate_conditional(
                        &a,
                        &cond,
                        *d,
                        Mode::MonteCarlo(ctx.samples),
                        &ctx.cfg,
                    )?,
                    ModeArg::Auto => best_estimate(&a, &cond, *d, ctx.samples, &ctx.cfg)?,
                };
                docs.push(Doc::from_estimate(a.label(), "prob", &est));
            }
        }
        Command::Expect { spec } => {
            for a in specs(spec)? {
                let est = estimate_e(&a, ctx.samples, &ctx.cfg)?;
                let mut doc = Doc::from_estimate(a.label(), "expect", &est);
                doc.d = None;
                docs.push(doc);
            }
        }
        Command::Pfg { spec, eta } => {
            let eta_inv = eta
                .as_deref()
                .map(|t| EtaInverse::from_eta(&rational(t)?))
                .transpose()?;
            for a in specs(spec)? {
                if let Some(inv) = &eta_inv {
                    let (v, est) = v_eta(&a, inv, Mode::Auto(ctx.samples), &ctx.cfg)?;
                    let mut doc = Doc::from_estimate(a.label(), "v_eta", &est);
                    doc.value = json!(v);
                    docs.push(doc);
                }
                let rep = pfg_report(&a, ctx.samples, &ctx.cfg)?;
                ctx.failed |= rep.checks.iter().any(|c| !c.pass);
                docs.push(
                    Doc::new(a.label(), "pfg", seed, "mixed", json!(rep.big_m)).with_detail(&rep),
                );
            }
        }
        Command::Dgen { spec, cap } => {
            for a in specs(spec)? {
                docs.push(Doc::new(
                    a.label(),
                    "dgen",
                    seed,
                    "exact",
                    json!(d_exact(&a, *cap)?),
                ));
            }
        }
        Command::Verify {
            suite,
            specs: given,
        } => {
            let texts: Vec<String> = if given.is_empty() {
                fqalg::estimator::default_grid(suite)?
                    .into_iter()
                    .map(String::from)
                    .collect()
            } else {
                given.clone()
            };
            let mut grid = Vec::new();
            for t in &texts {
                grid.extend(specs(t)?);
            }
            if !SUITES.contains(&suite.as_str()) {
                return Err(Error::invalid(format!(
                    "unknown suite {suite}; expected one of {SUITES:?}"
                )));
            }
            for c in verify_suite(suite, &grid, ctx.samples, &ctx.cfg)? {
                ctx.failed |= !c.pass;
                docs.push(check_doc(&c, &format!("verify:{}", c.id), seed));
            }
        }
        Command::Report { table } => {
            if table != "paper-tables" {
                return Err(Error::invalid(format!(
                    "unknown report {table:?}; expected paper-tables"
                )));
            }
            for row in criteria_table(&ctx.cfg) {
                ctx.failed |= !row.pass;
                let value = json!(if row.pass { "pass" } else { "fail" });
                docs.push(
                    Doc::new(
                        &format!("criterion {}", row.id),
                        "report",
                        seed,
                        "mixed",
                        value,
                    )
                    .with_detail(&row),
                );
            }
        }
    }
    Ok(docs)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } => 2,
        Error::TooLarge { .. } => 3,
        Error::Indeterminate(_) => 4,
    }
}

fn error_doc(e: &Error) -> Value {
    let kind = match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::Parse { .. } => "parse",
        Error::TooLarge { .. } => "too_large",
        Error::Indeterminate(_) => "indeterminate",
    };
    let mut doc =
        json!({ "error": kind, "message": e.to_string(), "version": env!("CARGO_PKG_VERSION") });
    if let Error::TooLarge { lower, upper, .. } = e {
        doc["lower"] = json!(lower);
        doc["upper"] = json!(upper);
    }
    doc
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 0 {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    if !(cli.ci > 0.0 && cli.ci < 1.0) {
        eprintln!("--ci must lie strictly between 0 and 1");
        return ExitCode::from(2);
    }
    let cfg = EstimatorConfig {
        seed: cli.seed,
        budget: cli.budget,
        level: cli.ci,
        exhaustive_threshold: cli.exhaustive_threshold,
    };
    let mut ctx = Run {
        cfg,
        samples: cli.samples,
        failed: false,
    };
    match run(&cli, &mut ctx) {
        Ok(docs) => {
            print!("{}", render(&docs, cli.format));
            if ctx.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&error_doc(&e)).expect("serializes")
            );
            eprintln!("fqalg: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
