//! Implementations behind the subcommands.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;
use tbpp_core::generator::{GeneratorError, InstanceClass, RawInstance};
use tbpp_core::io::{read_instance_file, write_instance_file, ParseError};

use crate::profile::{performance_profile, ProfileError};
use crate::record::{read_records, write_records, InstanceMeta, RunRecord};
use crate::runner::{run_method, Method, RunOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("no instance files found")]
    NoInstances,
    #[error("invalid thread count in TBPP_THREADS: {0}")]
    Threads(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `<class>_<i>_<T>.tbpp` for `i` in `1..=count` and every `T` in
/// `horizons`; all horizons of one `i` are truncations of the same raw
/// instance. Returns the written paths.
pub fn cmd_generate(
    classes: &[InstanceClass],
    count: u32,
    horizons: &[u32],
    seed: u64,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut written = Vec::new();
    for &class in classes {
        for i in 1..=count {
            let raw = RawInstance::generate(&class.params(i, seed.wrapping_add(u64::from(i))))?;
            for &t in horizons {
                let file = InstanceMeta::file_name(class, i, t);
                let name = file.trim_end_matches(".tbpp");
                let instance = raw.truncate(t, name)?;
                let path = out_dir.join(&file);
                write_instance_file(&path, &instance)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

pub fn cmd_solve(path: &Path, method: Method, options: &RunOptions) -> Result<RunRecord, CliError> {
    let instance = read_instance_file(path)?;
    Ok(run_method(&instance, method, options))
}

/// Instance files named directly or found (non-recursively) in directories,
/// sorted.
pub fn collect_instances(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            for entry in fs::read_dir(p).map_err(io_err(p))? {
                let entry = entry.map_err(io_err(p))?.path();
                if entry.extension().is_some_and(|e| e == "tbpp") {
                    files.push(entry);
                }
            }
        } else {
            files.push(p.clone());
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::NoInstances);
    }
    Ok(files)
}

/// Worker count from `TBPP_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("TBPP_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or(CliError::Threads(v)),
        Err(_) => Ok(None),
    }
}

/// Runs every method on every instance on a worker pool. Rows come back in
/// (file, method) order regardless of scheduling.
pub fn cmd_bench(
    paths: &[PathBuf],
    methods: &[Method],
    options: &RunOptions,
    threads: Option<usize>,
) -> Result<Vec<RunRecord>, CliError> {
    let files = collect_instances(paths)?;
    let instances = files
        .iter()
        .map(|f| read_instance_file(f))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, Method)> = (0..instances.len())
        .flat_map(|i| methods.iter().map(move |&m| (i, m)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("thread pool");
    Ok(pool.install(|| {
        jobs.par_iter()
            .map(|&(i, m)| run_method(&instances[i], m, options))
            .collect()
    }))
}

pub fn read_result_files(paths: &[PathBuf]) -> Result<Vec<RunRecord>, CliError> {
    let mut all = Vec::new();
    for p in paths {
        let file = fs::File::open(p).map_err(io_err(p))?;
        let recs = read_records(file).map_err(|source| CliError::Csv {
            path: p.clone(),
            source,
        })?;
        all.extend(recs);
    }
    Ok(all)
}

pub fn cmd_profile<W: Write>(paths: &[PathBuf], out: W) -> Result<(), CliError> {
    let records = read_result_files(paths)?;
    let points = performance_profile(&records)?;
    let mut w = csv::Writer::from_writer(out);
    for p in &points {
        w.serialize(p).map_err(|source| CliError::Csv {
            path: PathBuf::from("<output>"),
            source,
        })?;
    }
    w.flush().map_err(io_err(Path::new("<output>")))?;
    Ok(())
}

/// Writes records as CSV to `out`, or to standard output.
pub fn emit_records(records: &[RunRecord], out: Option<&Path>) -> Result<(), CliError> {
    let target = out.unwrap_or(Path::new("<stdout>"));
    let csv_err = |source| CliError::Csv {
        path: target.to_path_buf(),
        source,
    };
    match out {
        Some(p) => {
            let file = fs::File::create(p).map_err(io_err(p))?;
            write_records(file, records).map_err(csv_err)
        }
        None => write_records(io::stdout().lock(), records).map_err(csv_err),
    }
}
