use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use credal_core::ac::{check_ordered_properties, compile_ordered_ac};
use credal_core::bounds::{
    clb, compile_cspn, cub, cub_max, mar_max_cspn, min_lower_bound, BoundResult, DEFAULT_MAX_STEPS, DEFAULT_ORDERS,
};
use credal_core::model::{build_treatment_example, CredalNetwork, CredalSet, Event, Indicators};
use credal_core::oracle::mar_max_bruteforce;
use credal_core::spn::{evaluate_spn_nodes, row_label, SpnNode};
use credal_core::Error;

use crate::document::NetworkDocument;
use crate::report::{QueryEcho, QueryResultDocument, Timing, WitnessEntry, QUERY_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser)]
#[command(name = "credal", version, about = "Upper and lower bounds on event probabilities in credal networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a network file and check its compiled circuit
    Check { network: PathBuf },
    /// Bound the maximum (or minimum) probability of an event
    Query(QueryArgs),
    /// Walk through the strain/test/symptom/treatment example
    Demo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Cub,
    Cubmax,
    Clb,
    Minlb,
    Oracle,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Cub => "cub",
            Method::Cubmax => "cubmax",
            Method::Clb => "clb",
            Method::Minlb => "minlb",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct QueryArgs {
    pub network: PathBuf,
    /// Comma-separated `Var=value` literals
    #[arg(long, short)]
    pub event: String,
    #[arg(long, short, value_enum, default_value = "cub")]
    pub method: Method,
    /// `auto` or a comma-separated topological order
    #[arg(long, default_value = "auto")]
    pub order: String,
    #[arg(long, default_value_t = DEFAULT_ORDERS)]
    pub n_orders: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    /// Leave wall-clock fields out of the result
    #[arg(long)]
    pub no_timing: bool,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Runs the command line (including the program name) and captures its output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome::ok(text) } else { Outcome::fail(code, text) };
        }
    };
    match cli.command {
        Command::Check { network } => cmd_check(&network),
        Command::Query(args) => match cmd_query(&args) {
            Ok(doc) => Outcome::ok(doc.to_json()),
            Err(outcome) => outcome,
        },
        Command::Demo => Outcome::ok(cmd_demo()),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GuardExceeded { .. } => EXIT_GUARD,
        Error::UnknownVariable(_)
        | Error::UnknownValue { .. }
        | Error::InvalidEvent(_)
        | Error::NotTopological(_)
        | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_INVALID,
    }
}

/// Reads, parses and validates a network file.
pub fn load_network(path: &PathBuf) -> Result<CredalNetwork, Outcome> {
    let text = fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    let doc = NetworkDocument::parse(&text).map_err(|e| Outcome::fail(EXIT_INVALID, e))?;
    let net = doc
        .to_network()
        .map_err(|errors| Outcome::fail(EXIT_INVALID, errors.join("\n")))?;
    let violations = net.validate_network();
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Outcome::fail(EXIT_INVALID, lines.join("\n")));
    }
    Ok(net)
}

pub fn cmd_check(path: &PathBuf) -> Outcome {
    let net = match load_network(path) {
        Ok(net) => net,
        Err(outcome) => return outcome,
    };
    let s = net.structure();
    let order = s.default_order();
    let ac = match compile_ordered_ac(s, &order) {
        Ok(ac) => ac,
        Err(e) => return Outcome::fail(exit_code(&e), e.to_string()),
    };
    let report = check_ordered_properties(&ac, &order);
    let mut out = String::new();
    let _ = writeln!(out, "variables: {}", s.len());
    let _ = writeln!(out, "order: {}", s.order_names(&order).join(","));
    let _ = writeln!(out, "circuit: {} nodes, {} edges", ac.len(), ac.edge_count());
    for (name, ok) in [
        ("smooth", report.smooth),
        ("decomposable", report.decomposable),
        ("deterministic", report.deterministic),
        ("split_ordered", report.split_ordered),
        ("parents_determined", report.parents_determined),
    ] {
        let _ = writeln!(out, "{name}: {ok}");
    }
    if report.all() {
        out.push_str("ok\n");
        Outcome::ok(out)
    } else {
        Outcome {
            code: EXIT_INVALID,
            stdout: out,
            stderr: "circuit property check failed\n".into(),
        }
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn cspn_witness(net: &CredalNetwork, order: &[usize], result: &BoundResult) -> Result<Vec<WitnessEntry>, Error> {
    // recompiling is cheap next to the query and keeps BoundResult free of circuits
    let cspn = compile_cspn(net, order)?;
    let spn = cspn.spn();
    Ok(spn
        .sum_nodes()
        .map(|id| {
            let SpnNode::Sum { label, values, .. } = spn.node(id) else {
                unreachable!()
            };
            let branch = result.witness.get(id).unwrap_or(&[]);
            let mut weights = vec![0.0; spn.structure().cardinality(label.var)];
            for (&x, &w) in values.iter().zip(branch) {
                weights[x] = w;
            }
            WitnessEntry {
                key: row_label(spn.structure(), *label),
                node: Some(id.0),
                weights,
            }
        })
        .collect())
}

pub fn cmd_query(args: &QueryArgs) -> Result<QueryResultDocument, Outcome> {
    let net = load_network(&args.network)?;
    let s = net.structure();
    let fail = |e: Error| Outcome::fail(exit_code(&e), e.to_string());
    let event = Event::parse(s, &args.event).map_err(fail)?;
    let order = if args.order == "auto" {
        s.default_order()
    } else {
        if args.method == Method::Cubmax {
            return Err(Outcome::fail(EXIT_USAGE, "cubmax samples its own orders; use --order auto"));
        }
        let names: Vec<&str> = args.order.split(',').map(str::trim).collect();
        s.order_from_names(&names).map_err(fail)?
    };

    let (bound, direction, used, tried, steps, witness, timing) = match args.method {
        Method::Oracle => {
            let start = std::time::Instant::now();
            let opt = mar_max_bruteforce(&net, &event).map_err(fail)?;
            let mut witness = Vec::new();
            for v in 0..s.len() {
                for r in 0..s.row_count(v) {
                    witness.push(WitnessEntry {
                        key: s.row_path(v, r),
                        node: None,
                        weights: opt.argmax.row(v, r).to_vec(),
                    });
                }
            }
            let timing = Timing {
                query_ms: ms(start.elapsed()),
                compile_ms: 0.0,
            };
            (opt.value, "exact".to_string(), Vec::new(), 0, 0, witness, timing)
        }
        method => {
            let result = match method {
                Method::Cub => cub(&net, &event, &order),
                Method::Cubmax => cub_max(&net, &event, args.n_orders, args.seed),
                Method::Clb => clb(&net, &event, &order, args.max_steps),
                Method::Minlb => min_lower_bound(&net, &event, &order),
                Method::Oracle => unreachable!(),
            }
            .map_err(fail)?;
            let witness = match &result.tied {
                Some(tied) => tied
                    .iter()
                    .map(|(label, w)| WitnessEntry {
                        key: row_label(s, *label),
                        node: None,
                        weights: w.clone(),
                    })
                    .collect(),
                None => cspn_witness(&net, &result.order, &result).map_err(fail)?,
            };
            let timing = Timing {
                query_ms: ms(result.elapsed),
                compile_ms: ms(result.compile_time),
            };
            (
                result.bound,
                result.direction.as_str().to_string(),
                s.order_names(&result.order),
                result.orders_tried,
                result.steps,
                witness,
                timing,
            )
        }
    };

    Ok(QueryResultDocument {
        version: QUERY_VERSION.to_string(),
        query: QueryEcho {
            network: args.network.display().to_string(),
            event: args.event.clone(),
            method: args.method.name().to_string(),
            order: args.order.clone(),
            n_orders: args.n_orders,
            seed: args.seed,
            max_steps: args.max_steps,
        },
        method: args.method.name().to_string(),
        bound,
        direction,
        order: used,
        orders_tried: tried,
        steps,
        witness,
        timing: (!args.no_timing).then_some(timing),
    })
}

/// Fixed-point with trailing zeros removed, so `0.06999999999999999` prints as `0.07`.
pub fn format_prob(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn format_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| format_prob(x)).collect();
    format!("({})", parts.join(", "))
}

fn format_set(cs: &CredalSet) -> String {
    match cs {
        CredalSet::Point(p) => format!("point {}", format_vec(p)),
        CredalSet::Box { lower, upper } => format!("box {} .. {}", format_vec(lower), format_vec(upper)),
        CredalSet::Vertices(vs) => {
            let parts: Vec<String> = vs.iter().map(|v| format_vec(v)).collect();
            format!("hull {}", parts.join(" "))
        }
    }
}

/// The treatment walkthrough: sizes, then every sum node below `S=s3` with its
/// maximizing weights and value, then the root value.
pub fn cmd_demo() -> String {
    let (net, event) = build_treatment_example();
    let s = net.structure();
    let order = s.default_order();
    let ac = compile_ordered_ac(s, &order).expect("treatment compiles");
    let cspn = compile_cspn(&net, &order).expect("treatment compiles");
    let spn = cspn.spn();
    let result = mar_max_cspn(&cspn, &event).expect("valid event");
    let values = evaluate_spn_nodes(spn, &Indicators::from_event(s, &event), &result.witness).expect("complete witness");

    let mut out = String::new();
    let _ = writeln!(out, "network: {}", s.order_names(&(0..s.len()).collect::<Vec<_>>()).join(" "));
    for v in 0..s.len() {
        for r in 0..s.row_count(v) {
            let _ = writeln!(out, "  {:<8} {}", s.row_path(v, r), format_set(net.credal_set(v, r).expect("complete")));
        }
    }
    let _ = writeln!(out, "event: {}", event.format(s));
    let _ = writeln!(out, "order: {}", s.order_names(&order).join(","));
    let _ = writeln!(out, "arithmetic circuit: {} nodes, {} edges", ac.len(), ac.edge_count());
    let _ = writeln!(
        out,
        "credal spn: {} nodes, {} edges, {} sum nodes",
        spn.len(),
        spn.edge_count(),
        spn.sum_nodes().count()
    );
    out.push_str("maximizing weights:\n");
    let strain = s.lookup("S").expect("strain variable");
    let severe = s.value_of(strain, "s3").expect("severe strain");

    let mut stack = vec![(spn.root(), Vec::<String>::new())];
    while let Some((id, context)) = stack.pop() {
        match spn.node(id) {
            SpnNode::Sum { children, label, values: branch, .. } => {
                let w = result.witness.get(id).expect("every sum node solved");
                let domain = s.variable(label.var).domain();
                let weights: Vec<String> = branch
                    .iter()
                    .zip(w)
                    .map(|(&x, &wk)| format!("{}={}", domain[x], format_prob(wk)))
                    .collect();
                let under = if context.is_empty() { String::new() } else { format!("[{}] ", context.join(",")) };
                let _ = writeln!(
                    out,
                    "  {under}{} weights {} value {}",
                    row_label(s, *label),
                    weights.join(" "),
                    format_prob(values[id.0])
                );
                for (k, &child) in children.iter().enumerate().rev() {
                    // only the severe branch of the strain split is followed
                    if label.var == strain && branch[k] != severe {
                        continue;
                    }
                    let mut next = context.clone();
                    next.push(format!("{}={}", s.name(label.var), domain[branch[k]]));
                    stack.push((child, next));
                }
            }
            SpnNode::Product { children } => {
                for &child in children.iter().rev() {
                    stack.push((child, context.clone()));
                }
            }
            SpnNode::Indicator { .. } => {}
        }
    }
    let _ = writeln!(out, "root value {}", format_prob(values[spn.root().0]));
    out
}
