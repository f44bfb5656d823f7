//! Command-line surface over the quadorders library: factorization,
//! membership, class numbers, Davenport constants, elasticity, witnesses,
//! certificates, and the verification suite.

mod record;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use quadorders::davenport::{
    davenport_certificate, davenport_group, davenport_of_order, find_order_subproduct,
    DavenportOutcome, GroupSpec, UpperCheck,
};
use quadorders::elasticity::{
    elasticity_of_element, factorization_lengths, order_elasticity, OrderElasticity,
};
use quadorders::factorization::{factor_element, DEFAULT_CLASS_SEARCH_BUDGET};
use quadorders::field::{make_field, FieldContext};
use quadorders::orders::{class_number_of_order, Order};
use quadorders::quadint::QuadInt;
use quadorders::suite::{checks, run_all, CheckConfig, DEFAULT_SEED};

use record::Record;

/// Environment variable overriding the search budget (flag takes precedence).
const BUDGET_ENV: &str = "QUADORDERS_BUDGET";

#[derive(Parser)]
#[command(
    name = "quadorders",
    version,
    about = "Davenport constants and elasticity of orders in imaginary quadratic fields"
)]
struct Cli {
    /// Output mode
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,
    /// Search-budget override for residue-class prime searches
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Seed for the randomized property checks of `reproduce`
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factor an element into canonical primes of Z[w]
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        element: String,
    },
    /// Order and conductor membership of an element in Z[f*w]
    Member {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        f: u64,
        #[arg(long)]
        element: String,
    },
    /// Class number of the order Z[f*w]
    ClassNumber {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        f: u64,
        /// Class number of the ambient ring of integers
        #[arg(long, default_value_t = 1)]
        field_class_number: u64,
    },
    /// Generalized Davenport constant of Z[f*w] (prime conductor)
    Davenport {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        f: u64,
        /// Also produce and verify the two-sided certificate
        #[arg(long)]
        certify: bool,
        /// Additionally scan subproducts without unit multiples
        #[arg(long)]
        strict_units: bool,
    },
    /// Classical Davenport constant of a finite abelian group
    DavenportGroup {
        /// Invariant factors, e.g. 2,4
        #[arg(long)]
        factors: String,
    },
    /// Elasticity of an element, or of the order when --element is omitted
    Elasticity {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        f: u64,
        #[arg(long)]
        element: Option<String>,
    },
    /// Factorization length set of an element in the order
    Lengths {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        f: u64,
        #[arg(long)]
        element: String,
    },
    /// Element attaining the order's elasticity
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        f: u64,
    },
    /// Two-sided certificate for the Davenport constant
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        f: u64,
        /// Additionally scan subproducts without unit multiples
        #[arg(long)]
        strict_units: bool,
    },
    /// Run the verification suite
    Reproduce {
        /// Run only the items whose id contains this substring
        #[arg(long)]
        only: Option<String>,
        /// List item ids without executing
        #[arg(long)]
        list: bool,
    },
}

enum CliError {
    Usage(String),
    Domain(quadorders::Error),
}

impl From<quadorders::Error> for CliError {
    fn from(e: quadorders::Error) -> Self {
        match e {
            quadorders::Error::ParseElement(_) => CliError::Usage(e.to_string()),
            other => CliError::Domain(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}

fn resolve_budget(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s.parse().map_err(|_| {
            CliError::Usage(format!("{} must be an integer, got {:?}", BUDGET_ENV, s))
        }),
        Err(_) => Ok(DEFAULT_CLASS_SEARCH_BUDGET),
    }
}

fn parse_el(ctx: &FieldContext, s: &str) -> Result<QuadInt, CliError> {
    Ok(ctx.parse_element(s)?)
}

fn elems(list: &[QuadInt]) -> String {
    list.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn ratio_string(r: &quadorders::elasticity::Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn emit(record: &Record, mode: OutputMode) {
    match mode {
        OutputMode::Text => print!("{}", record.render_text()),
        OutputMode::Structured => print!("{}", record.render_structured()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let mode = cli.output;
    let budget = resolve_budget(cli.budget)?;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let start = Instant::now();
    match cli.cmd {
        Cmd::Factor { d, element } => {
            let ctx = make_field(d)?;
            let x = parse_el(&ctx, &element)?;
            let f = factor_element(&x, &ctx)?;
            let mut r = Record::new("factor");
            r.push("d", d);
            r.push("element", &x);
            r.push("unit", &f.unit);
            r.push(
                "factors",
                f.factors
                    .iter()
                    .map(|(p, e)| format!("({})^{}", p, e))
                    .collect::<Vec<_>>()
                    .join(";"),
            );
            r.push("text", &f);
            r.push("provenance", "brute-force");
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::Member { d, f, element } => {
            let ctx = make_field(d)?;
            let order = Order::new(ctx.clone(), f)?;
            let x = parse_el(&ctx, &element)?;
            let mut r = Record::new("member");
            r.push("d", d);
            r.push("f", f);
            r.push("element", &x);
            r.push("value", order.contains(&x));
            r.push("in-conductor", order.conductor_contains(&x));
            r.push("provenance", "formula");
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::ClassNumber {
            d,
            f,
            field_class_number,
        } => {
            let ctx = make_field(d)?;
            let order = Order::new(ctx, f)?;
            let h = class_number_of_order(&order, field_class_number)?;
            let mut r = Record::new("class-number");
            r.push("d", d);
            r.push("f", f);
            r.push("field-class-number", field_class_number);
            r.push("value", h);
            r.push("provenance", "formula");
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::Davenport {
            d,
            f,
            certify,
            strict_units,
        } => {
            let ctx = make_field(d)?;
            let order = Order::new(ctx, f)?;
            let mut r = Record::new("davenport");
            r.push("d", d);
            r.push("f", f);
            let mut provenance = "formula";
            match davenport_of_order(&order)? {
                DavenportOutcome::Finite(v) => {
                    r.push("value", v);
                    if certify {
                        let cert = davenport_certificate(&order, budget)?;
                        if cert.lower.len() as u64 + 1 != v {
                            return Err(CliError::Domain(quadorders::Error::Internal(
                                "certificate disagrees with the formula value".into(),
                            )));
                        }
                        r.push("witness.generator", &cert.generator);
                        r.push("witness.lower", elems(cert.lower.factors()));
                        match cert.upper {
                            UpperCheck::Verified { multisets } => {
                                r.push("certificate.upper", format!("verified:{}", multisets));
                                provenance = "both-agree";
                            }
                            UpperCheck::Refused { p } => {
                                r.push("certificate.upper", format!("refused:{}", p));
                            }
                        }
                        if strict_units {
                            let hit = find_order_subproduct(&cert.lower, &order, false)?;
                            r.push(
                                "certificate.strict-scan",
                                if hit.is_some() { "subproduct" } else { "none" },
                            );
                        }
                    }
                }
                DavenportOutcome::Infinite(w) => {
                    r.push("value", "inf");
                    r.push("witness.prime", &w.prime);
                    r.push("witness.verified-lengths", w.verified_lengths);
                    r.push("witness.reason", &w.reason);
                    provenance = "both-agree";
                }
                DavenportOutcome::Unsupported(reason) => {
                    r.push("value", "unsupported");
                    r.push("reason", reason);
                }
            }
            r.push("provenance", provenance);
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::DavenportGroup { factors } => {
            let parsed: Result<Vec<u64>, _> = factors
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect();
            let parsed = parsed
                .map_err(|_| CliError::Usage(format!("cannot parse --factors {:?}", factors)))?;
            let spec = GroupSpec::new(parsed)?;
            let out = davenport_group(&spec)?;
            let mut r = Record::new("davenport-group");
            r.push(
                "factors",
                spec.factors()
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            r.push("order", spec.order());
            r.push("value", out.value);
            r.push(
                "extremal",
                out.extremal
                    .iter()
                    .map(|t| {
                        format!(
                            "({})",
                            t.iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(";"),
            );
            r.push("provenance", "brute-force");
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::Elasticity { d, f, element } => {
            let ctx = make_field(d)?;
            let order = Order::new(ctx.clone(), f)?;
            let mut r = Record::new("elasticity");
            r.push("d", d);
            r.push("f", f);
            match element {
                Some(s) => {
                    let x = parse_el(&ctx, &s)?;
                    let e = elasticity_of_element(&x, &order)?;
                    r.push("element", &x);
                    r.push("value", ratio_string(&e.value));
                    r.push(
                        "lengths",
                        e.enumeration
                            .lengths
                            .iter()
                            .map(|l| l.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                    r.push("witness.short", elems(&e.shortest));
                    r.push("witness.long", elems(&e.longest));
                    r.push("provenance", "brute-force");
                }
                None => match order_elasticity(&order, budget)? {
                    OrderElasticity::Finite(fe) => {
                        r.push("value", ratio_string(&fe.value));
                        r.push("witness", &fe.witness);
                        r.push("witness.short", elems(&fe.short));
                        r.push("witness.long", elems(&fe.long));
                        if let Some(e) = &fe.enumeration {
                            r.push(
                                "witness.lengths",
                                e.lengths
                                    .iter()
                                    .map(|l| l.to_string())
                                    .collect::<Vec<_>>()
                                    .join(","),
                            );
                            r.push("provenance", "both-agree");
                        } else {
                            r.push("evidence", "two-explicit-factorizations");
                            r.push("provenance", "formula");
                        }
                    }
                    OrderElasticity::Infinite(fam) => {
                        r.push("value", "inf");
                        r.push("family.prime", &fam.split_prime);
                        r.push("family.count", fam.instances.len());
                        for inst in &fam.instances {
                            r.push(&format!("family.{}.element", inst.n), &inst.element);
                            r.push(&format!("family.{}.short", inst.n), elems(&inst.short));
                            r.push(&format!("family.{}.long", inst.n), elems(&inst.long));
                        }
                        r.push("provenance", "both-agree");
                    }
                    OrderElasticity::Unsupported(reason) => {
                        r.push("value", "unsupported");
                        r.push("reason", reason);
                        r.push("provenance", "formula");
                    }
                },
            }
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::Lengths { d, f, element } => {
            let ctx = make_field(d)?;
            let order = Order::new(ctx.clone(), f)?;
            let x = parse_el(&ctx, &element)?;
            let e = factorization_lengths(&x, &order)?;
            let mut r = Record::new("lengths");
            r.push("d", d);
            r.push("f", f);
            r.push("element", &x);
            r.push(
                "lengths",
                e.lengths
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            for (len, sample) in &e.samples {
                r.push(&format!("sample.{}", len), elems(sample));
            }
            r.push("provenance", "brute-force");
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::Witness { d, f } => {
            let ctx = make_field(d)?;
            let order = Order::new(ctx, f)?;
            let mut r = Record::new("witness");
            r.push("d", d);
            r.push("f", f);
            match order_elasticity(&order, budget)? {
                OrderElasticity::Finite(fe) => {
                    r.push("value", &fe.witness);
                    r.push("elasticity", ratio_string(&fe.value));
                    r.push("witness.short", elems(&fe.short));
                    r.push("witness.long", elems(&fe.long));
                    r.push(
                        "provenance",
                        if fe.enumeration.is_some() {
                            "both-agree"
                        } else {
                            "formula"
                        },
                    );
                }
                OrderElasticity::Infinite(fam) => {
                    r.push("value", "inf");
                    r.push("family.prime", &fam.split_prime);
                    r.push("provenance", "both-agree");
                }
                OrderElasticity::Unsupported(reason) => {
                    r.push("value", "unsupported");
                    r.push("reason", reason);
                    r.push("provenance", "formula");
                }
            }
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::Certify { d, f, strict_units } => {
            let ctx = make_field(d)?;
            let order = Order::new(ctx, f)?;
            let cert = davenport_certificate(&order, budget)?;
            let mut r = Record::new("certify");
            r.push("d", d);
            r.push("f", f);
            r.push("value", cert.lower.len() as u64 + 1);
            r.push("witness.generator", &cert.generator);
            r.push("witness.lower", elems(cert.lower.factors()));
            match cert.upper {
                UpperCheck::Verified { multisets } => {
                    r.push("certificate.upper", format!("verified:{}", multisets));
                    r.push("provenance", "both-agree");
                }
                UpperCheck::Refused { p } => {
                    r.push("certificate.upper", format!("refused:{}", p));
                    r.push("provenance", "formula");
                }
            }
            if strict_units {
                let hit = find_order_subproduct(&cert.lower, &order, false)?;
                r.push(
                    "certificate.strict-scan",
                    if hit.is_some() { "subproduct" } else { "none" },
                );
            }
            r.push("elapsed.ms", start.elapsed().as_millis());
            emit(&r, mode);
        }
        Cmd::Reproduce { only, list } => {
            if list {
                let mut r = Record::new("reproduce-list");
                for c in checks() {
                    r.push(&format!("item.{}", c.id), c.title);
                }
                emit(&r, mode);
                return Ok(ExitCode::SUCCESS);
            }
            let available = checks();
            if let Some(filter) = &only {
                if !available.iter().any(|c| c.id.contains(filter.as_str())) {
                    return Err(CliError::Usage(format!(
                        "no suite item matches {:?}; try `reproduce --list`",
                        filter
                    )));
                }
            }
            let cfg = CheckConfig { seed, budget };
            let outcomes = run_all(only.as_deref(), &cfg);
            let passed = outcomes.iter().filter(|o| o.passed).count();
            match mode {
                OutputMode::Text => {
                    let width = outcomes.iter().map(|o| o.id.len()).max().unwrap_or(0);
                    for o in &outcomes {
                        println!(
                            "{}  {:width$}  {:>10.1?}",
                            if o.passed { "PASS" } else { "FAIL" },
                            o.id,
                            o.elapsed,
                            width = width
                        );
                        for note in &o.notes {
                            println!("      {}", note);
                        }
                        if let Some(fail) = &o.failure {
                            println!("      failure: {}", fail);
                        }
                    }
                    println!("passed {}/{}", passed, outcomes.len());
                }
                OutputMode::Structured => {
                    let mut r = Record::new("reproduce");
                    r.push("seed", seed);
                    r.push("budget", budget);
                    for o in &outcomes {
                        r.push(
                            &format!("item.{}", o.id),
                            if o.passed { "pass" } else { "fail" },
                        );
                        r.push(&format!("item.{}.ms", o.id), o.elapsed.as_millis());
                        if let Some(fail) = &o.failure {
                            r.push(&format!("item.{}.failure", o.id), fail);
                        }
                    }
                    r.push("summary.passed", passed);
                    r.push("summary.total", outcomes.len());
                    emit(&r, mode);
                }
            }
            if passed != outcomes.len() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
