use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};

use qpf_core::complexity::{
    base_speed_ratio, find_crossover, format_sig, sweep, to_csv, ComplexityError, ComplexityParams,
};
use qpf_core::grid::{
    build_reduced_system, load_network, network_stats, solve_dc, wscc9, GridError, Network,
};
use qpf_core::hhl::{hhl_program, run_hhl, HhlConfig, HhlError, HhlResult};
use qpf_core::qsim::{dump_circuit, metrics};
use serde::Serialize;

use crate::args::{
    Command, CostArgs, CrossoverArgs, Fixture, Format, HhlArgs, Method, MetricsArgs, Output,
    RatioArgs, SolveArgs, Source, StatsArgs, SweepArgs,
};

/// A failed invocation and its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or invalid input.
    Usage(String),
    /// Non-positive-definite system, no crossover and similar.
    Numerical(String),
    PostSelection(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::PostSelection(_) => 3,
        }
    }

    /// `kind: message` on a single line.
    pub fn line(&self) -> String {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Numerical(m) => ("numerical", m),
            Failure::PostSelection(m) => ("post_selection", m),
        };
        format!("{kind}: {}", msg.replace('\n', " "))
    }
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        match e {
            GridError::Disconnected(_) | GridError::NotPositiveDefinite => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<HhlError> for Failure {
    fn from(e: HhlError) -> Self {
        match e {
            HhlError::Grid(g) => g.into(),
            HhlError::PostSelection { .. } => Failure::PostSelection(e.to_string()),
            HhlError::InvalidAlpha(_) | HhlError::InvalidOverride(..) | HhlError::TooWide(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<ComplexityError> for Failure {
    fn from(e: ComplexityError) -> Self {
        match e {
            ComplexityError::NoCrossover(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Stats(a) => stats(a),
        Command::Metrics(a) => circuit_metrics(a),
        Command::Crossover(a) => crossover(a),
        Command::Sweep(a) => cost_sweep(a),
        Command::Ratio(a) => ratio(a),
    }
}

fn load(source: &Source) -> Result<Network> {
    if let Some(Fixture::Wscc9) = source.fixture {
        return Ok(wscc9());
    }
    let path = source.input.as_ref().expect("clap enforces one source");
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        Ok(load_network(buf.as_slice())?)
    } else {
        Ok(Network::from_path(path)?)
    }
}

fn emit(output: &Output, text: String) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn hhl_config(a: &HhlArgs) -> HhlConfig {
    HhlConfig {
        alpha: a.alpha,
        t_override: a.t,
        c_override: a.c,
        scaling: a.scaling.into(),
        ..HhlConfig::default()
    }
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

#[derive(Serialize)]
struct ClassicalReport {
    method: &'static str,
    bus_order: Vec<u32>,
    theta_rad: Vec<f64>,
    theta_unit: Vec<f64>,
}

#[derive(Serialize)]
struct HhlReport<'a> {
    method: &'static str,
    bus_order: &'a [u32],
    #[serde(flatten)]
    result: &'a HhlResult,
}

fn solve(a: &SolveArgs) -> Result<()> {
    let network = load(&a.source)?;
    let sys = build_reduced_system(&network)?;
    let theta = solve_dc(&sys)?;
    let theta_unit = unit(theta.as_slice());
    let format = a.output.format.unwrap_or(Format::Json);

    if let Some(path) = &a.dump {
        let program = hhl_program(&sys, &hhl_config(&a.hhl))?;
        fs::write(path, dump_circuit(&program.circuit))
            .map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display())))?;
    }

    let text = match a.method {
        Method::Classical => match format {
            Format::Json => json(&ClassicalReport {
                method: "classical",
                bus_order: sys.bus_order.clone(),
                theta_rad: theta.iter().copied().collect(),
                theta_unit,
            }),
            Format::Csv => {
                let mut s = String::from("bus,theta_rad\n");
                for (bus, t) in sys.bus_order.iter().zip(theta.iter()) {
                    writeln!(s, "{bus},{t}").unwrap();
                }
                s
            }
            Format::Text => {
                let mut s = format!("{:>5}  {:>12}  {:>10}\n", "bus", "theta_rad", "unit");
                for ((bus, t), u) in sys.bus_order.iter().zip(theta.iter()).zip(&theta_unit) {
                    writeln!(s, "{bus:>5}  {t:>12.6}  {u:>10.4}").unwrap();
                }
                s
            }
        },
        Method::Hhl => {
            let result = run_hhl(&sys, &hhl_config(&a.hhl))?;
            match format {
                Format::Json => json(&HhlReport {
                    method: "hhl",
                    bus_order: &sys.bus_order,
                    result: &result,
                }),
                Format::Csv => {
                    let mut s = String::from("bus,classical_unit,quantum_unit\n");
                    for ((bus, c), q) in sys
                        .bus_order
                        .iter()
                        .zip(&theta_unit)
                        .zip(&result.solution_unit)
                    {
                        writeln!(s, "{bus},{c},{q}").unwrap();
                    }
                    s
                }
                Format::Text => hhl_text(&sys.bus_order, &theta_unit, &result),
            }
        }
    };
    emit(&a.output, text)
}

fn hhl_text(bus_order: &[u32], classical_unit: &[f64], r: &HhlResult) -> String {
    let mut s = format!("{:>5}  {:>10}  {:>10}\n", "bus", "classical", "quantum");
    // Classical column uses the same sign convention as the readout.
    let dot: f64 = classical_unit
        .iter()
        .zip(&r.solution_unit)
        .map(|(a, b)| a * b)
        .sum();
    let sign = if dot < 0.0 { -1.0 } else { 1.0 };
    for ((bus, c), q) in bus_order.iter().zip(classical_unit).zip(&r.solution_unit) {
        writeln!(s, "{bus:>5}  {:>10.4}  {q:>10.4}", sign * c).unwrap();
    }
    s.push('\n');
    let rows = [
        ("fidelity", format!("{:.6}", r.fidelity)),
        (
            "success_probability",
            format!("{:.6}", r.success_probability),
        ),
        ("recovered_norm", format!("{:.6}", r.recovered_norm)),
        (
            "residual_clock_leak",
            format!("{:.3e}", r.residual_clock_leak),
        ),
        ("alpha", r.config.alpha.to_string()),
        ("t", format!("{:.6}", r.scaling.t)),
        ("c", format!("{:.6}", r.scaling.c)),
        ("width", r.metrics.width.to_string()),
        ("depth", r.metrics.depth.to_string()),
        ("cnot_count", r.metrics.cnot_count.to_string()),
    ];
    for (k, v) in rows {
        writeln!(s, "{k:<20} {v}").unwrap();
    }
    s
}

fn stats(a: &StatsArgs) -> Result<()> {
    let st = network_stats(&load(&a.source)?)?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&st),
        Format::Csv => {
            let mut s = String::from("index,eigenvalue\n");
            for (i, l) in st.eigenvalues.iter().enumerate() {
                writeln!(s, "{i},{l}").unwrap();
            }
            s
        }
        Format::Text => {
            let eig: Vec<String> = st.eigenvalues.iter().map(|l| format!("{l:.4}")).collect();
            format!(
                "n            {}\ns            {}\nk_ratio      {:.6}\neigenvalues  {}\n",
                st.n,
                st.s,
                st.k_ratio,
                eig.join(" ")
            )
        }
    };
    emit(&a.output, text)
}

fn circuit_metrics(a: &MetricsArgs) -> Result<()> {
    let sys = build_reduced_system(&load(&a.source)?)?;
    let program = hhl_program(&sys, &hhl_config(&a.hhl))?;
    let m = metrics(&program.circuit);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&m),
        Format::Csv => format!(
            "width,depth,cnot_count\n{},{},{}\n",
            m.width, m.depth, m.cnot_count
        ),
        Format::Text => format!(
            "width       {}\ndepth       {}\ncnot_count  {}\n",
            m.width, m.depth, m.cnot_count
        ),
    };
    emit(&a.output, text)
}

fn cost_params(c: &CostArgs) -> (ComplexityParams, ComplexityParams) {
    let classical = ComplexityParams::new(
        c.s_classical.unwrap_or(c.s),
        c.k_classical.unwrap_or(c.k),
        c.eps_classical,
    )
    .with_bases(c.log_n_base, c.log_eps_base);
    let quantum = ComplexityParams::new(
        c.s_quantum.unwrap_or(c.s),
        c.k_quantum.unwrap_or(c.k),
        c.eps_quantum,
    )
    .with_bases(c.log_n_base, c.log_eps_base);
    (classical, quantum)
}

fn crossover(a: &CrossoverArgs) -> Result<()> {
    let (classical, quantum) = cost_params(&a.cost);
    let report = find_crossover(&classical, &quantum, a.base_ratio)?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => to_csv(&report.samples),
        Format::Text => format!(
            "n_star          {}\nconstant_ratio  {}\nconvention      {}\n",
            format_sig(report.n_star, 6),
            report.constant_ratio,
            report.convention
        ),
    };
    emit(&a.output, text)
}

fn cost_sweep(a: &SweepArgs) -> Result<()> {
    let (classical, quantum) = cost_params(&a.cost);
    let rows = sweep(
        &classical,
        &quantum,
        a.base_ratio,
        (a.n_min, a.n_max),
        a.steps,
    )?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => json(&rows),
        Format::Csv => to_csv(&rows),
        Format::Text => {
            let mut s = format!(
                "{:>12}  {:>14}  {:>14}\n",
                "n", "classical", "quantum_scaled"
            );
            for r in &rows {
                writeln!(
                    s,
                    "{:>12}  {:>14}  {:>14}",
                    format_sig(r.n, 6),
                    format_sig(r.classical_cost, 6),
                    format_sig(r.quantum_cost_scaled, 6)
                )
                .unwrap();
            }
            s
        }
    };
    emit(&a.output, text)
}

#[derive(Serialize)]
struct RatioReport {
    n: f64,
    ratio: f64,
    classical: ComplexityParams,
    quantum: ComplexityParams,
}

fn ratio(a: &RatioArgs) -> Result<()> {
    let (classical, quantum) = cost_params(&a.cost);
    let r = base_speed_ratio(a.n, &classical, &quantum)?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&RatioReport {
            n: a.n,
            ratio: r,
            classical,
            quantum,
        }),
        Format::Csv => format!("n,ratio\n{},{}\n", format_sig(a.n, 6), format_sig(r, 6)),
        Format::Text => format!(
            "n      {}\nratio  {}\n",
            format_sig(a.n, 6),
            format_sig(r, 6)
        ),
    };
    emit(&a.output, text)
}
