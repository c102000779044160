use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::failure::{CmdResult, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Output directory plus the list of files written so far.
pub struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    pub fn new(dir: &Path) -> CmdResult<Self> {
        fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> CmdResult<PathBuf> {
        let p = self.path(name);
        let text = serde_json::to_string_pretty(value).map_err(|e| Failure::runtime(format!("cannot serialize {name}: {e}")))?;
        fs::write(&p, text + "\n").map_err(|e| Failure::runtime(format!("cannot write {}: {e}", p.display())))?;
        Ok(p)
    }

    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> CmdResult<PathBuf> {
        let p = self.path(name);
        let err = |e: csv::Error| Failure::runtime(format!("cannot write {}: {e}", p.display()));
        let mut w = csv::Writer::from_path(&p).map_err(err)?;
        for r in rows {
            w.serialize(r).map_err(err)?;
        }
        w.flush().map_err(|e| Failure::runtime(format!("cannot write {}: {e}", p.display())))?;
        Ok(p)
    }

    /// Header plus raw records, for tables whose columns are only known at run time.
    pub fn csv_records(&mut self, name: &str, header: &[String], records: &[Vec<String>]) -> CmdResult<PathBuf> {
        let p = self.path(name);
        let err = |e: csv::Error| Failure::runtime(format!("cannot write {}: {e}", p.display()));
        let mut w = csv::Writer::from_path(&p).map_err(err)?;
        w.write_record(header).map_err(err)?;
        for r in records {
            w.write_record(r).map_err(err)?;
        }
        w.flush().map_err(|e| Failure::runtime(format!("cannot write {}: {e}", p.display())))?;
        Ok(p)
    }

    /// Rows in the selected format, as `<stem>.csv` or `<stem>.json`.
    pub fn table<T: Serialize>(&mut self, stem: &str, format: Format, rows: &[T]) -> CmdResult<PathBuf> {
        let name = format!("{stem}.{}", format.extension());
        match format {
            Format::Csv => self.csv(&name, rows),
            Format::Json => self.json(&name, rows),
        }
    }
}

/// `"a,b,c"` into a list, reporting the flag name on failure.
pub fn parse_list<T: std::str::FromStr>(flag: &str, src: &str) -> CmdResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    src.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|e| Failure::input(format!("--{flag}: `{s}`: {e}"))))
        .collect()
}

/// `start:stop:step`, inclusive of `stop` when it is hit exactly.
pub fn parse_range(flag: &str, src: &str) -> CmdResult<Vec<usize>> {
    let parts = parse_list_sep::<usize>(flag, src, ':')?;
    let (start, stop, step) = match parts.as_slice() {
        [v] => (*v, *v, 1),
        [a, b] => (*a, *b, 1),
        [a, b, c] => (*a, *b, *c),
        _ => return Err(Failure::input(format!("--{flag}: expected start:stop:step, got `{src}`"))),
    };
    if step == 0 {
        return Err(Failure::input(format!("--{flag}: step must be positive")));
    }
    let values: Vec<usize> = (start..=stop).step_by(step).collect();
    if values.is_empty() {
        return Err(Failure::input(format!("--{flag}: `{src}` is an empty sweep")));
    }
    Ok(values)
}

fn parse_list_sep<T: std::str::FromStr>(flag: &str, src: &str, sep: char) -> CmdResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    src.split(sep)
        .map(|s| s.trim().parse::<T>().map_err(|e| Failure::input(format!("--{flag}: `{s}`: {e}"))))
        .collect()
}

/// Shortest round-trip text of a float; `inf`, `-inf` and `NaN` as Rust prints them.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn joined<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}
