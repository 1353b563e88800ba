//! Library side of the `oplab` command-line tool: config parsing, task
//! orchestration, canned examples and grid export.

pub mod config;
pub mod examples;
pub mod format;
pub mod grid;
pub mod tasks;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use oplab_core::criteria::DEFAULT_CAP;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{AnalysisConfig, Task};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VIOLATED: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}

/// Divergence cap, from `OPLAB_CAP` when set.
pub fn cap_from_env() -> Result<f64, CliError> {
    match std::env::var("OPLAB_CAP") {
        Err(_) => Ok(DEFAULT_CAP),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(c) if c > 0.0 => Ok(c),
            _ => Err(CliError::Config(format!("OPLAB_CAP must be a positive number, got {s:?}"))),
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub tool_version: String,
    pub config_echo: AnalysisConfig,
    pub results: BTreeMap<String, Value>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl ReportBundle {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are plain JSON");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub strict: bool,
    pub jobs: usize,
    pub timings: bool,
    pub cap: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { strict: false, jobs: 1, timings: true, cap: DEFAULT_CAP }
    }
}

/// Run every task of `cfg`. Returns the bundle and the exit code it implies.
pub fn analyze(cfg: &AnalysisConfig, opts: &AnalyzeOptions) -> Result<(ReportBundle, i32), CliError> {
    let setup = cfg.setup(opts.cap)?;
    let n = cfg.tasks.len();
    let slots: Mutex<Vec<Option<(Value, f64, bool)>>> = Mutex::new(vec![None; n]);
    let next = AtomicUsize::new(0);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= n {
            break;
        }
        let start = Instant::now();
        let (value, failed) = match tasks::run_task(cfg.tasks[i], &setup) {
            Ok(v) => (v, false),
            Err(e) => (json!({"error": {"kind": tasks::error_kind(&e), "message": e.to_string()}}), true),
        };
        let ms = start.elapsed().as_secs_f64() * 1e3;
        slots.lock().expect("no task panics while holding the lock")[i] = Some((value, ms, failed));
    };
    let jobs = opts.jobs.clamp(1, n.max(1));
    if jobs == 1 {
        work();
    } else {
        std::thread::scope(|sc| {
            for _ in 0..jobs {
                sc.spawn(work);
            }
        });
    }

    let mut results = BTreeMap::new();
    let mut timings_ms = BTreeMap::new();
    let (mut any_error, mut any_violation) = (false, false);
    for (task, slot) in cfg.tasks.iter().zip(slots.into_inner().expect("workers joined")) {
        let (value, ms, failed) = slot.expect("every task ran");
        any_error |= failed;
        any_violation |= !failed && tasks::has_violation(&value);
        if opts.timings {
            timings_ms.insert(task.name(), ms);
        }
        results.insert(task.name(), value);
    }
    let code = if any_error {
        EXIT_NUMERICAL
    } else if opts.strict && any_violation {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    };
    let bundle = ReportBundle {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_echo: cfg.clone(),
        results,
        timings_ms,
    };
    Ok((bundle, code))
}

pub fn read_config(path: &std::path::Path) -> Result<AnalysisConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    AnalysisConfig::parse(&text).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}
