use std::process::ExitCode;

use clap::Parser;
use clap::error::ErrorKind;

use lxf_cli::commands::{cmd_diagnose, cmd_refine, cmd_run, cmd_translate};
use lxf_cli::report::{all_pass, Outcome};
use lxf_cli::{Cli, CliResult, Command};

const EXIT_USAGE: u8 = 1;
const EXIT_DIAGNOSTIC: u8 = 2;

fn print_outcomes(outcomes: &[Outcome]) {
    for o in outcomes {
        println!("{o}");
    }
}

fn dispatch(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Run(args) => {
            let s = cmd_run(&args)?;
            let m = &s.metadata;
            println!("problem   {}", m.problem);
            println!("lattice   dx={} dt={} lambda={} kappa={} N={}", m.dx, m.dt, m.lambda, m.kappa, m.n_max);
            println!("window    j in [{}, {}], T={}", m.j_min, m.j_max, m.horizon);
            println!("states    min U={} max U={}", s.min_state, s.max_state);
            println!("wrote     {}", s.files.join(", "));
            Ok(true)
        }
        Command::Diagnose(args) => {
            let r = cmd_diagnose(&args)?;
            let m = &r.metadata;
            println!("{}: {} cells, dx={}, dt={}, N={}, weight {}", m.problem, m.cells, m.dx, m.dt, m.n_max, m.weight);
            println!(
                "dissipation sum {:.6e}, temporal square sum {:.6e}, entropy production mass {:.6e}",
                r.dissipation_sum, r.temporal_square_sum, r.psi_mass
            );
            print_outcomes(&r.outcomes);
            Ok(r.passed())
        }
        Command::Refine(args) => {
            let r = cmd_refine(&args)?;
            println!("{:>7} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}", "cells", "dx", "dissipation", "temporal", "psi mass", "stat x", "l1 finest");
            for row in &r.rows {
                println!(
                    "{:>7} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e}",
                    row.cells, row.dx, row.dissipation_sum, row.temporal_square_sum, row.psi_mass, row.spatial_statistic, row.l1_to_finest
                );
            }
            for note in &r.notes {
                println!("note: {note}");
            }
            print_outcomes(&r.outcomes);
            Ok(r.passed())
        }
        Command::Translate(args) => {
            let (s, t, outcomes) = cmd_translate(&args)?;
            for m in [s, t].into_iter().flatten() {
                for p in &m.curve.samples {
                    println!("{:?} offset {:.6e} modulus {:.6e}", m.curve.axis, p.offset, p.modulus);
                }
            }
            print_outcomes(&outcomes);
            Ok(all_pass(&outcomes))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_DIAGNOSTIC),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
