//! Command-line front end for the `ffzeta` library.

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::sync::Arc;

use clap::Parser;
use ffzeta::lseries::Engine;
use ffzeta::scalars::Field;

use cache::DiskCache;
use commands::{dispatch, Cli, CliError, Ctx, EXIT_FAIL, EXIT_USAGE};
use config::RunConfig;

/// Result of one invocation: exit status and what goes to stdout.
#[derive(Debug)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn resolve_config(cli: &Cli, env: &dyn Fn(&str) -> Option<String>) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_env(env)?;
    if let Some(v) = cli.q {
        cfg.q = v;
    }
    if let Some(v) = cli.ext {
        cfg.ext = v;
    }
    if let Some(v) = cli.prec {
        cfg.prec = v;
    }
    if let Some(v) = cli.cap {
        cfg.cap = v;
    }
    if let Some(v) = cli.threads {
        cfg.threads = Some(v);
    }
    if let Some(v) = &cli.cache {
        cfg.cache = Some(v.clone());
    }
    if cli.no_cache {
        cfg.cache = None;
    }
    if let Some(v) = cli.format {
        cfg.format = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn seed_in_file(cli: &Cli) -> bool {
    let Some(path) = &cli.config else { return false };
    std::fs::read_to_string(path)
        .map(|t| t.lines().any(|l| l.split('#').next().unwrap_or("").trim_start().starts_with("seed")))
        .unwrap_or(false)
}

/// Rendered report and whether it passed.
fn execute(cli: &Cli, cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let spec = cfg.field_spec().map_err(CliError::usage)?;
    let field = Field::new(&spec)?;
    let mut engine = Engine::new(field.clone(), cfg.cap);
    if let Some(dir) = &cfg.cache {
        let cache = DiskCache::open(dir, &field)
            .map_err(|e| CliError::usage(format!("cache directory {}: {e}", dir.display())))?;
        engine = engine.with_cache(Arc::new(cache));
    }
    let ctx = Ctx { engine, prec: cfg.prec, seed: cfg.seed, seed_given: cli.seed.is_some() || seed_in_file(cli) };
    let out = dispatch(&cli.command, &ctx)?;
    let text = output::render(&out, cfg, &field).map_err(CliError::usage)?;
    Ok((text, out.pass))
}

/// Runs one invocation with the given arguments and environment.
pub fn run<I, T>(args: I, env: &dyn Fn(&str) -> Option<String>) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutput { code, stdout: text, stderr: String::new() }
            } else {
                RunOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let cfg = match resolve_config(&cli, env) {
        Ok(c) => c,
        Err(e) => return RunOutput { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    if let Some(n) = cfg.threads {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli, &cfg) {
        Ok((stdout, true)) => RunOutput { code: 0, stdout, stderr: String::new() },
        // a failed verification still prints its report
        Ok((stdout, false)) => RunOutput { code: EXIT_FAIL, stdout, stderr: "verification failed\n".into() },
        Err(e) => RunOutput { code: e.code, stdout: String::new(), stderr: format!("error: {}\n", e.message) },
    }
}
