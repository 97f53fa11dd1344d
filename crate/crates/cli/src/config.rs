//! Flag defaults from an INI-style file.
//!
//! Keys are long flag names without the dashes. `[common]` (or keys before
//! any header) apply to every subcommand that has the flag; `[<subcommand>]`
//! sections apply to that subcommand only and must name real flags.

use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser};

use crate::args::{Cli, Command, OutputArgs};
use crate::error::CliError;

pub const OUT_DIR_VAR: &str = "THETAFLOW_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub section: Option<String>,
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Fully merged and validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub config: Option<PathBuf>,
    /// Effective argument list after splicing in file values.
    pub argv: Vec<String>,
}

pub fn parse_ini(path: &str, text: &str) -> Result<Vec<Entry>, CliError> {
    let mut section = None;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: &str| CliError::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        };
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated section header"))?;
            if name.trim().is_empty() {
                return Err(err("empty section name"));
            }
            section = Some(name.trim().to_string());
            continue;
        }
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`"))?;
        let key = k.trim();
        if key.is_empty() {
            return Err(err("missing key before `=`"));
        }
        if out
            .iter()
            .any(|e: &Entry| e.section == section && e.key == key)
        {
            return Err(err(&format!("duplicate key `{key}`")));
        }
        out.push(Entry {
            section: section.clone(),
            key: key.to_string(),
            value: v.trim().to_string(),
            line,
        });
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<Vec<Entry>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })?;
    parse_ini(&path.display().to_string(), &text)
}

/// The config path and, for the two-token form, the index of its value.
fn config_path(argv: &[String]) -> Option<(Option<usize>, PathBuf)> {
    argv.iter().enumerate().skip(1).find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).map(|p| (Some(i + 1), PathBuf::from(p)))
        } else {
            a.strip_prefix("--config=")
                .map(|p| (None, PathBuf::from(p)))
        }
    })
}

/// argv with file values spliced in right after the subcommand name, so that
/// any later flag on the real command line overrides them.
pub fn merge_argv(
    argv: &[String],
    path: &Path,
    entries: &[Entry],
) -> Result<Vec<String>, CliError> {
    let cmd = Cli::command();
    let names: Vec<String> = cmd
        .get_subcommands()
        .map(|s| s.get_name().to_string())
        .collect();
    let skip = config_path(argv).and_then(|(i, _)| i);
    let Some(pos) = argv
        .iter()
        .enumerate()
        .skip(1)
        .position(|(i, a)| Some(i) != skip && names.contains(a))
        .map(|p| p + 1)
    else {
        return Ok(argv.to_vec());
    };
    let sub = cmd.find_subcommand(&argv[pos]).expect("known subcommand");
    let flags: Vec<&str> = sub
        .get_arguments()
        .filter_map(|a| a.get_long())
        .filter(|l| !matches!(*l, "config" | "help"))
        .collect();

    let mut inserted = Vec::new();
    for e in entries {
        let scoped = match e.section.as_deref() {
            None | Some("common") => false,
            Some(s) if s == argv[pos] => true,
            Some(s) if names.iter().any(|n| n == s) => continue,
            Some(s) => {
                return Err(CliError::Parse {
                    path: path.display().to_string(),
                    line: e.line,
                    msg: format!("unknown section [{s}]"),
                })
            }
        };
        if flags.contains(&e.key.as_str()) {
            inserted.push(format!("--{}={}", e.key, e.value));
        } else if scoped {
            return Err(CliError::Parse {
                path: path.display().to_string(),
                line: e.line,
                msg: format!("`{}` is not a flag of {}", e.key, argv[pos]),
            });
        }
    }
    let mut out = argv[..=pos].to_vec();
    out.extend(inserted);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}

pub fn run_config<I, S>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let path = config_path(&argv).map(|(_, p)| p);
    if let Some(p) = &path {
        let entries = load_config(p)?;
        argv = merge_argv(&argv, p, &entries)?;
    }
    let cli = Cli::try_parse_from(&argv)?;
    let mut command = cli.command;
    validate(&mut command)?;
    Ok(RunConfig {
        command,
        config: cli.config,
        argv,
    })
}

fn positive(field: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::invalid(
            field,
            format!("must be positive, got {v}"),
        ))
    }
}

fn nonempty(field: &str, n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::invalid(field, "grid must not be empty"));
    }
    Ok(())
}

fn ordered(field: &str, lo: f64, hi: f64) -> Result<(), CliError> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(CliError::invalid(field, format!("need {lo} <= {hi}")));
    }
    Ok(())
}

fn resolve_out(o: &mut OutputArgs, stem: &str) -> Result<(), CliError> {
    if o.out.is_none() {
        match std::env::var_os(OUT_DIR_VAR) {
            Some(dir) if !dir.is_empty() => {
                o.out = Some(PathBuf::from(dir).join(format!("{stem}.{}", o.format.extension())))
            }
            _ => {
                return Err(CliError::invalid(
                    "out",
                    format!("output path required (pass --out or set {OUT_DIR_VAR})"),
                ))
            }
        }
    }
    Ok(())
}

pub fn validate(command: &mut Command) -> Result<(), CliError> {
    match command {
        Command::ThetaEval(a) => {
            nonempty("t-steps", a.t_steps)?;
            ordered("t-min/t-max", a.t_min, a.t_max)?;
            resolve_out(&mut a.output, "theta")?;
        }
        Command::Integrate(a) => {
            positive("tol", a.tol)?;
            ordered("t0/t1", a.t0, a.t1)?;
            nonempty("max-steps", a.max_steps)?;
            resolve_out(&mut a.output, "trajectory")?;
        }
        Command::Invariants(a) => {
            positive("tol", a.tol)?;
            ordered("t0/t1", a.t0, a.t1)?;
            if a.samples < 2 {
                return Err(CliError::invalid("samples", "need at least 2"));
            }
        }
        Command::BracketCheck(a) => {
            positive("tol", a.tol)?;
            nonempty("points", a.points)?;
        }
        Command::QuantizeCheck(a) => {
            if a.d_min < 2 || a.d_min > a.d_max {
                return Err(CliError::invalid(
                    "d-min/d-max",
                    format!("need 2 <= {} <= {}", a.d_min, a.d_max),
                ));
            }
        }
        Command::LegendreCheck(a) => {
            positive("h", a.h)?;
            positive("rel-tol", a.rel_tol)?;
            positive("compat-tol", a.compat_tol)?;
            nonempty("samples", a.samples)?;
        }
        Command::MathieuBands(a) => {
            nonempty("a-steps", a.a_steps)?;
            ordered("a-min/a-max", a.a_min, a.a_max)?;
            positive("e-max", a.e_max)?;
            if a.m < 8 {
                return Err(CliError::invalid(
                    "m",
                    format!("must be at least 8, got {}", a.m),
                ));
            }
            resolve_out(&mut a.output, "chart")?;
        }
    }
    Ok(())
}
