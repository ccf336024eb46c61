//! `cmodlab`: congruence modules and Wiles defects from the command line.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmodlab_core::invariants::{congruence_module, deform, ext1_truncated};
use cmodlab_core::laws::{parse_law_list, run_laws, DEFAULT_SAMPLES, DEFAULT_SEED};
use cmodlab_core::poly::{parse_input, parse_poly, InputFile, LambdaModule, LambdaStructure, TruncationContext};
use cmodlab_core::CmodError;

/// Exit codes.
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_IN_CATEGORY: u8 = 3;
const EXIT_COMPUTATION: u8 = 4;
const EXIT_LAW_FAILURE: u8 = 5;
const EXIT_PRECISION: u8 = 6;

/// Default Λ-structure degree for regular inputs without a structure block.
const REGULAR_DEGREE: u32 = 16;

#[derive(Parser)]
#[command(name = "cmodlab", version, about = "Congruence modules and Wiles defects over Z_(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print Phi, Psi, eta, rank and defect for the modules of an input file.
    Report {
        file: PathBuf,
        /// Only this module block (default: every block, or A itself).
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run laws such as `L1-L12` or `L3,L9` on seeded corpora.
    Verify {
        laws: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
    /// Deform by a sequence of elements of the augmentation ideal.
    Deform {
        file: PathBuf,
        #[arg(long = "elem", required = true)]
        elems: Vec<String>,
        #[arg(long)]
        module: Option<String>,
        #[arg(long = "N", default_value_t = 20)]
        n: u32,
        #[arg(long = "D", default_value_t = 8)]
        d: u32,
        #[arg(long)]
        json: bool,
    },
    /// Truncated Ext^1 at increasing precision, compared with descent.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        module: Option<String>,
        #[arg(long = "N", default_value_t = 20)]
        n: u32,
        #[arg(long = "D", default_value_t = 8)]
        d: u32,
        #[arg(long)]
        json: bool,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<CmodError> for Failure {
    fn from(e: CmodError) -> Self {
        let code = match e {
            CmodError::Parse { .. } | CmodError::BadAugmentationForm(_) => EXIT_PARSE,
            CmodError::NotInCategory(_) => EXIT_NOT_IN_CATEGORY,
            CmodError::PrecisionExhausted(_) => EXIT_PRECISION,
            _ => EXIT_COMPUTATION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_PARSE, message: message.into() }
}

struct Loaded {
    input: InputFile,
    structure: LambdaStructure,
}

impl Loaded {
    fn read(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let input = parse_input(&text)?;
        let structure = match &input.structure {
            Some(l) => l.clone(),
            None => LambdaStructure::for_regular(&input.algebra, REGULAR_DEGREE)?,
        };
        Ok(Loaded { input, structure })
    }

    fn modules(&self, only: Option<&str>) -> Result<Vec<(String, LambdaModule)>, Failure> {
        if let Some(name) = only {
            if name == "A" && !self.input.modules.iter().any(|b| b.name == "A") {
                return Ok(vec![("A".into(), LambdaModule::regular(&self.structure))]);
            }
            return self
                .input
                .modules
                .iter()
                .find(|b| b.name == name)
                .map(|b| vec![(b.name.clone(), b.module.clone())])
                .ok_or_else(|| usage(format!("no module block named `{name}`")));
        }
        if self.input.modules.is_empty() {
            return Ok(vec![("A".into(), LambdaModule::regular(&self.structure))]);
        }
        Ok(self.input.modules.iter().map(|b| (b.name.clone(), b.module.clone())).collect())
    }

    fn module(&self, only: Option<&str>) -> Result<(String, LambdaModule), Failure> {
        let mut all = self.modules(only)?;
        if all.len() != 1 {
            return Err(usage("several module blocks: choose one with --module"));
        }
        Ok(all.remove(0))
    }
}

fn seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("CMODLAB_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("CMODLAB_SEED must be an integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Report { file, module, json } => {
            let loaded = Loaded::read(&file)?;
            let mut reports = Vec::new();
            for (name, m) in loaded.modules(module.as_deref())? {
                let r = congruence_module(&loaded.input.algebra, &loaded.structure, &m)?;
                reports.push((name, r));
            }
            if json {
                println!("{}", render::reports_json(&reports));
            } else {
                print!("{}", render::reports_table(&reports));
            }
            Ok(0)
        }
        Command::Verify { laws, seed: flag, samples, json } => {
            let laws = parse_law_list(&laws).map_err(usage)?;
            let results = run_laws(&laws, seed(flag)?, samples);
            if json {
                println!("{}", render::laws_json(&results));
            } else {
                print!("{}", render::laws_table(&results));
            }
            Ok(if results.iter().all(|r| r.passed()) { 0 } else { EXIT_LAW_FAILURE })
        }
        Command::Deform { file, elems, module, n, d, json } => {
            let loaded = Loaded::read(&file)?;
            let (_, m) = loaded.module(module.as_deref())?;
            let a = &loaded.input.algebra;
            let names = a.names();
            let fs = elems
                .iter()
                .map(|e| parse_poly(e, &names).map_err(|msg| usage(format!("element `{e}`: {msg}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let ctx = TruncationContext::new(n, d)?;
            let step = deform(a, &loaded.structure, &m, &fs, &ctx)?;
            if json {
                println!("{}", render::deform_json(&step, &names));
            } else {
                print!("{}", render::deform_table(&step, &names));
            }
            Ok(if step.holds() { 0 } else { EXIT_COMPUTATION })
        }
        Command::Sweep { file, module, n, d, json } => {
            let loaded = Loaded::read(&file)?;
            let (_, m) = loaded.module(module.as_deref())?;
            let a = &loaded.input.algebra;
            if a.codimension() != 1 {
                return Err(usage("sweep needs an input with one lambda variable"));
            }
            let descent = congruence_module(a, &loaded.structure, &m)?;
            let ctx = TruncationContext::new(n, d)?;
            let outcome = ext1_truncated(a, &loaded.structure, &m, &ctx)?;
            let agrees = outcome.stabilized && outcome.psi_length == descent.psi_length;
            if json {
                println!("{}", render::sweep_json(&outcome, &descent, agrees));
            } else {
                print!("{}", render::sweep_table(&outcome, &descent, agrees));
            }
            Ok(if agrees { 0 } else { EXIT_COMPUTATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
