use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use torifan::{
    fan_for_drawing, parse_fan, parse_request, parse_weight, run_report, verify_report, write_svg, AnalysisRequest,
    CliError, CliResult, Command,
};

#[derive(Parser)]
#[command(name = "torifan", version, about = "Exact analysis of rational polyhedral cones and their limit F-blowup fans")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Cone document: {"rank": d, "rays": [[...], ...]}.
    #[arg(long, global = true)]
    cone: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Draw the computed fan (or the cone itself) as an SVG cross-section.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Cross-check fingerprints against the grid (1/l)·M on every cone of the fan.
    #[arg(long = "grid-l", global = true)]
    grid_l: Option<u32>,
    /// Maximum number of cell labels to enumerate.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Height bound for minimal elements of S_σ.
    #[arg(long = "height-bound", global = true)]
    height_bound: Option<String>,
    /// Fixed squared-norm bound for arrow directions, as "p/q".
    #[arg(long = "norm-bound", global = true)]
    norm_bound: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dual cone.
    Dual,
    /// Hilbert bases of σ ∩ N and of the dual monoid.
    Hilbert,
    /// Divisor classification table.
    Divisors,
    /// Interior lattice point test at a weight.
    RayTest {
        #[arg(long)]
        w: String,
    },
    /// Critical arrows and the dimension bound at a weight.
    Arrows {
        #[arg(long)]
        w: String,
    },
    /// The limit F-blowup fan.
    Delta,
    /// Moderate checks for a subdivision.
    Moderate {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Crepant checks for a subdivision.
    Crepant {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Everything that needs no extra input.
    Report,
    /// Re-check the certificates of a stored report.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(path.display().to_string(), e.to_string()))
}

fn build_request(cli: &Cli) -> CliResult<AnalysisRequest> {
    let path = cli.cone.as_ref().ok_or_else(|| CliError::input("--cone", "required"))?;
    let mut req = parse_request(&read(path)?)?;
    let rank = req.cone.rank;
    let fan = |p: &PathBuf| -> CliResult<_> {
        let f = parse_fan(&read(p)?)?;
        if f.rank != rank {
            return Err(CliError::input("--fan", format!("fan rank {} differs from cone rank {rank}", f.rank)));
        }
        Ok(f)
    };
    req.commands = vec![match &cli.command {
        Cmd::Dual => Command::Dual,
        Cmd::Hilbert => Command::Hilbert,
        Cmd::Divisors => Command::Divisors,
        Cmd::RayTest { w } => Command::RayTest(parse_weight(w, rank)?),
        Cmd::Arrows { w } => Command::Arrows(parse_weight(w, rank)?),
        Cmd::Delta => Command::Delta,
        Cmd::Moderate { fan: p } => Command::Moderate(fan(p)?),
        Cmd::Crepant { fan: p } => Command::Crepant(fan(p)?),
        Cmd::Report => Command::Report,
        Cmd::Verify { .. } => unreachable!("handled before"),
    }];
    if let Some(l) = cli.grid_l {
        req.options.grid_l = Some(l);
    }
    if let Some(b) = cli.budget {
        req.options.cell_budget = b;
    }
    if let Some(h) = &cli.height_bound {
        req.options.height_bound = Some(h.trim().parse().map_err(|_| CliError::input("--height-bound", "expected an integer"))?);
    }
    if let Some(n) = &cli.norm_bound {
        req.options.norm_bound = Some(torifan::json::parse_rat(n).map_err(|e| CliError::input("--norm-bound", e))?);
    }
    if let Some(p) = &cli.svg {
        req.options.svg_path = Some(p.display().to_string());
    }
    Ok(req)
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<u8> {
    if let Cmd::Verify { report } = &cli.command {
        let v = verify_report(&read(report)?)?;
        emit(
            cli,
            &format!("{{\"certificates_verified\": {}, \"delta_checked\": {}}}\n", v.certificates, v.delta_checked),
        )?;
        return Ok(0);
    }
    let req = build_request(cli)?;
    let report = run_report(&req)?;
    emit(cli, &report.to_json_string())?;
    if let Some(p) = &req.options.svg_path {
        let sigma = req.cone.cone()?;
        write_svg(&fan_for_drawing(&report, &sigma)?, p.as_ref())?;
    }
    Ok(if !report.certification.ok() {
        3
    } else if report.budget_skipped() {
        2
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
