use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use symgrowth::cli::job::parse_eta;
use symgrowth::cli::{error_json, exit_code, parse_job, run, Command, JobSpec, Report};
use symgrowth::error::{Error, Result};
use symgrowth::fixtures::{fixture, fixture_names, standard_fixtures};

#[derive(Parser, Debug)]
#[command(name = "symgrowth", version, about = "Complete resolutions, Betti growth and cohomology operators over graded Artinian rings")]
struct Args {
    /// Job file; `-` reads standard input.
    job: Option<PathBuf>,

    /// Resolution length on each side [default: 8].
    #[arg(long)]
    steps: Option<usize>,

    /// Number of trailing indices used by the eventual checks [default: 4].
    #[arg(long)]
    tail: Option<usize>,

    /// Coefficients of η, e.g. "1,2".
    #[arg(long)]
    eta: Option<String>,

    #[arg(long)]
    seed: Option<u64>,

    /// Overrides the command in the job file.
    #[arg(long)]
    cmd: Option<String>,

    /// Write JSON here; `-` means standard output instead of the table.
    #[arg(long)]
    json: Option<PathBuf>,

    /// Run a built-in fixture instead of a job file.
    #[arg(long, conflicts_with = "job")]
    fixture: Option<String>,

    /// Run every built-in fixture.
    #[arg(long, conflicts_with_all = ["job", "fixture"])]
    all_fixtures: bool,

    /// Print the canonical job text and exit.
    #[arg(long)]
    print_job: bool,
}

fn load(args: &Args) -> Result<JobSpec> {
    let mut job = if let Some(name) = &args.fixture {
        fixture(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown fixture `{name}`; known: {}", fixture_names().join(", "))))?
            .job
    } else {
        let path = args
            .job
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no job file given (or use --fixture / --all-fixtures)".into()))?;
        let text = if path.as_os_str() == "-" {
            std::io::read_to_string(std::io::stdin())?
        } else {
            std::fs::read_to_string(path)?
        };
        parse_job(&text)?
    };
    apply_overrides(args, &mut job)?;
    Ok(job)
}

fn apply_overrides(args: &Args, job: &mut JobSpec) -> Result<()> {
    if let Some(s) = args.steps {
        job.steps = s;
    }
    if let Some(t) = args.tail {
        job.tail = t;
    }
    if let Some(s) = args.seed {
        job.seed = s;
    }
    if let Some(e) = &args.eta {
        job.eta = Some(parse_eta(e).map_err(Error::InvalidInput)?);
    }
    if let Some(c) = &args.cmd {
        job.cmd = c.parse::<Command>().map_err(Error::InvalidInput)?;
    }
    Ok(())
}

fn emit(args: &Args, json: &str, text: &str) -> Result<()> {
    match &args.json {
        Some(p) if p.as_os_str() == "-" => print!("{json}"),
        Some(p) => {
            std::fs::write(p, json)?;
            print!("{text}");
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn all_fixtures(args: &Args) -> ExitCode {
    let jobs: Vec<(String, Result<JobSpec>)> = standard_fixtures()
        .into_iter()
        .map(|f| {
            let mut job = f.job;
            let r = apply_overrides(args, &mut job).map(|_| job);
            (f.name.to_string(), r)
        })
        .collect();
    let results: Vec<(String, Result<Report>)> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(name, job)| {
                s.spawn(move || {
                    let r = match job {
                        Ok(j) => run(j),
                        Err(e) => Err(Error::InvalidInput(e.to_string())),
                    };
                    (name.clone(), r)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("fixture thread")).collect()
    });
    let mut code = 0;
    let mut json = serde_json::Map::new();
    let mut text = String::new();
    for (name, r) in results {
        text += &format!("== {name}\n");
        match r {
            Ok(rep) => {
                text += &rep.to_text();
                json.insert(name, serde_json::to_value(&rep).expect("report serializes"));
            }
            Err(e) => {
                code = code.max(exit_code(&e));
                text += &format!("error: {e}\n");
                json.insert(name, serde_json::from_str(&error_json(&e)).expect("error json"));
            }
        }
    }
    let json = serde_json::to_string_pretty(&json).expect("serializes") + "\n";
    if let Err(e) = emit(args, &json, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.all_fixtures {
        return all_fixtures(&args);
    }
    let outcome = load(&args).and_then(|job| {
        if args.print_job {
            print!("{job}");
            return Ok(None);
        }
        run(&job).map(Some)
    });
    match outcome {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(rep)) => match emit(&args, &rep.to_json(), &rep.to_text()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprint!("{}", error_json(&e));
                ExitCode::from(exit_code(&e) as u8)
            }
        },
        Err(e) => {
            let body = error_json(&e);
            match &args.json {
                Some(p) if p.as_os_str() == "-" => print!("{body}"),
                Some(p) => {
                    let _ = std::fs::write(p, &body);
                    eprint!("{body}");
                }
                None => eprint!("{body}"),
            }
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
