use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use qsphere::algebra::{apply_aut, Automorphism, Truncation};
use qsphere::cochains::{cap, Cochain};
use qsphere::complex::{boundary, cyclic_t, Chain};
use qsphere::expr::{parse, parse_scalar, render};
use qsphere::homology::{fundamental_class, h0_reduce, h2_class, H0Label, TraceFunctional};
use qsphere::verify::{emit_report, parse_selection, run_suite, ReportFormat};
use qsphere::volume::{eta, is_cyclic, phi, Functional2, PhiVariant};

#[derive(Parser)]
#[command(
    name = "qsphere",
    version,
    about = "Exact twisted Hochschild calculus on the standard Podleś sphere"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the normal form of an algebra expression.
    Normalize { expr: String },
    /// Multiply two algebra expressions.
    Mul { left: String, right: String },
    /// Apply the automorphism σ_λ to an expression.
    Aut {
        #[arg(long)]
        twist: String,
        expr: String,
    },
    /// Hochschild boundary of a chain.
    Boundary {
        #[command(flatten)]
        io: ChainIo,
    },
    /// Cyclic operator t applied to a chain.
    Cyclic {
        #[command(flatten)]
        io: ChainIo,
    },
    /// Cap product of a chain with a named cochain.
    Cap {
        #[command(flatten)]
        io: ChainIo,
        /// d1, d0, dm1, x0^i, inner:<expr>@<twist> or cup(<name>,<name>).
        #[arg(long)]
        cochain: String,
    },
    /// Evaluate a named cochain on algebra expressions.
    CupEval {
        #[arg(long)]
        cochain: String,
        args: Vec<String>,
    },
    /// Evaluate a twisted trace on an expression.
    Trace {
        /// 1, x0, x0^i, x1^j or xm1^j.
        #[arg(long)]
        label: String,
        #[arg(long)]
        twist: String,
        expr: String,
    },
    /// Coordinates of an expression in H_0 at the given twist.
    H0 {
        #[arg(long)]
        twist: String,
        expr: String,
    },
    /// Coordinate of a 2-cycle against the fundamental class.
    H2class {
        #[arg(long)]
        chain: String,
    },
    /// The volume functional on a 2-chain.
    Phi {
        #[arg(long, value_enum, default_value_t = Variant::Delta)]
        variant: Variant,
        #[arg(long)]
        chain: String,
    },
    /// The counter-term η on a 2-chain.
    Eta {
        #[arg(long)]
        chain: String,
    },
    /// Check cyclicity of a named functional on basis 2-chains.
    CyclicCheck {
        #[arg(long)]
        functional: String,
        #[arg(long, env = "QS2_TRUNCATION", default_value = "3,3")]
        truncation: Truncation,
    },
    /// Run the verification suite.
    Verify {
        /// `all` or a comma separated list such as C1,C4.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, env = "QS2_TRUNCATION", default_value = "3,3")]
        truncation: Truncation,
        #[arg(long, value_enum, default_value_t = Report::Md)]
        report: Report,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-check runtimes in the report.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(clap::Args)]
struct ChainIo {
    /// A chain file, or `fundamental` for the built-in fundamental class.
    #[arg(long)]
    chain: String,
    /// Write the resulting chain here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a one-line rendering instead of JSON.
    #[arg(long)]
    render: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Delta,
    Efd,
    Cap,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Md,
    Json,
}

fn read_chain(source: &str) -> Result<Chain> {
    if source == "fundamental" {
        return Ok(fundamental_class());
    }
    let text = fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
    Chain::from_json(&text).with_context(|| format!("in {source}"))
}

fn twist(text: &str) -> Result<Automorphism> {
    let lam = parse_scalar(text).with_context(|| format!("twist {text:?}"))?;
    Ok(Automorphism::new(lam)?)
}

fn expr(text: &str) -> Result<qsphere::AlgElem> {
    parse(text).with_context(|| format!("expression {text:?}"))
}

fn emit_chain(io: &ChainIo, c: &Chain) -> Result<String> {
    let text = if io.render { c.render() } else { c.to_json() };
    match &io.out {
        Some(path) => {
            fs::write(path, format!("{text}\n"))
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn run(cmd: Cmd) -> Result<(String, bool)> {
    let out = match cmd {
        Cmd::Normalize { expr: e } => render(&expr(&e)?),
        Cmd::Mul { left, right } => render(&expr(&left)?.mul(&expr(&right)?)),
        Cmd::Aut { twist: t, expr: e } => render(&apply_aut(&twist(&t)?, &expr(&e)?)),
        Cmd::Boundary { io } => emit_chain(&io, &boundary(&read_chain(&io.chain)?)?)?,
        Cmd::Cyclic { io } => emit_chain(&io, &cyclic_t(&read_chain(&io.chain)?))?,
        Cmd::Cap { io, cochain } => {
            let phi = Cochain::parse_name(&cochain)?;
            emit_chain(&io, &cap(&read_chain(&io.chain)?, &phi)?)?
        }
        Cmd::CupEval { cochain, args } => {
            let phi = Cochain::parse_name(&cochain)?;
            let args = args.iter().map(|a| expr(a)).collect::<Result<Vec<_>>>()?;
            render(&phi.eval(&args)?)
        }
        Cmd::Trace {
            label,
            twist: t,
            expr: e,
        } => {
            let label: H0Label = label.parse()?;
            TraceFunctional::new(label, twist(&t)?)?
                .eval(&expr(&e)?)
                .to_string()
        }
        Cmd::H0 { twist: t, expr: e } => h0_reduce(&expr(&e)?, &twist(&t)?).to_string(),
        Cmd::H2class { chain } => h2_class(&read_chain(&chain)?)?.to_string(),
        Cmd::Phi { variant, chain } => {
            let v = match variant {
                Variant::Delta => PhiVariant::Delta,
                Variant::Efd => PhiVariant::Efd,
                Variant::Cap => PhiVariant::Cap,
            };
            phi(&read_chain(&chain)?, v)?.to_string()
        }
        Cmd::Eta { chain } => eta(&read_chain(&chain)?)?.to_string(),
        Cmd::CyclicCheck {
            functional,
            truncation,
        } => {
            let f: Functional2 = functional.parse()?;
            let r = is_cyclic(f, truncation)?;
            let mut s = format!(
                "{f}: {} on {} basis 2-chains within {truncation}",
                if r.is_cyclic() {
                    "cyclic"
                } else {
                    "not cyclic"
                },
                r.chains_checked
            );
            for (t, v) in r.t_defects.iter().take(10) {
                s.push_str(&format!("\nt-defect {}: {v}", tensor_text(t)));
            }
            if r.t_defects.len() > 10 {
                s.push_str(&format!("\n… {} t-defects", r.t_defects.len()));
            }
            for (t, v) in r.unital.iter().take(10) {
                s.push_str(&format!("\nunital {}: {v}", tensor_text(t)));
            }
            if r.unital.len() > 10 {
                s.push_str(&format!("\n… {} unital violations", r.unital.len()));
            }
            s
        }
        Cmd::Verify {
            suite,
            truncation,
            report,
            out,
            timings,
        } => {
            let selection = parse_selection(&suite)?;
            let results = run_suite(&selection, truncation);
            let format = match report {
                Report::Md => ReportFormat::Markdown,
                Report::Json => ReportFormat::Json,
            };
            let text = emit_report(&results, format, timings);
            let failed = results.iter().any(|r| r.status.is_fail());
            let text = match out {
                Some(path) => {
                    fs::write(&path, &text)
                        .with_context(|| format!("writing {}", path.display()))?;
                    qsphere::verify::summary_line(&results)
                }
                None => text.trim_end().to_string(),
            };
            return Ok((text, !failed));
        }
    };
    Ok((out, true))
}

fn tensor_text(t: &[qsphere::BasisIndex]) -> String {
    let parts: Vec<String> = t
        .iter()
        .map(|b| qsphere::expr::render_monomial(*b))
        .collect();
    parts.join(" ⊗ ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((text, ok)) => {
            if !text.is_empty() {
                // a closed pipe is not an error worth reporting
                let _ = writeln!(std::io::stdout(), "{text}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
