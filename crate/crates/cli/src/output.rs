//! Row output as CSV or a JSON array of objects.
//!
//! Numbers are rendered once, to 12 significant digits, and the JSON values
//! are parsed back from that text so both formats carry identical digits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Flag(b) => u8::from(*b).to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => format_number(*x)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Flag(b) => Value::from(u8::from(*b)),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// 12 significant digits; scientific notation for |x| ≥ 1e6 or |x| < 1e-4,
/// fixed otherwise. Trailing zeros are dropped.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    if !(-4..6).contains(&exp) {
        let m = trim_fraction(mantissa);
        return format!("{sign}{m}e{exp}");
    }
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let fixed = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{}", trim_fraction(&fixed))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

enum Inner {
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Json {
        out: BufWriter<Box<dyn Write>>,
        rows: usize,
    },
}

/// Streams rows with a fixed header to a file or standard output.
pub struct RowWriter {
    header: Vec<&'static str>,
    inner: Inner,
}

impl RowWriter {
    pub fn open(
        format: Format,
        path: Option<&Path>,
        header: Vec<&'static str>,
    ) -> io::Result<Self> {
        let dest: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p).map_err(|e| {
                io::Error::new(e.kind(), format!("cannot write {}: {e}", p.display()))
            })?),
            None => Box::new(io::stdout().lock()),
        };
        let inner = match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(dest);
                w.write_record(&header).map_err(io::Error::from)?;
                Inner::Csv(Box::new(w))
            }
            Format::Json => {
                let mut out = BufWriter::new(dest);
                out.write_all(b"[")?;
                Inner::Json { out, rows: 0 }
            }
        };
        Ok(Self { header, inner })
    }

    pub fn row(&mut self, cells: &[Cell]) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.header.len());
        match &mut self.inner {
            Inner::Csv(w) => w
                .write_record(cells.iter().map(Cell::text))
                .map_err(io::Error::from),
            Inner::Json { out, rows } => {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(cells)
                    .map(|(k, c)| (k.to_string(), c.json()))
                    .collect();
                out.write_all(if *rows == 0 { b"\n" } else { b",\n" })?;
                serde_json::to_writer(&mut *out, &obj)?;
                *rows += 1;
                Ok(())
            }
        }
    }

    pub fn finish(self) -> io::Result<()> {
        match self.inner {
            Inner::Csv(mut w) => w.flush(),
            Inner::Json { mut out, .. } => {
                out.write_all(b"\n]\n")?;
                out.flush()
            }
        }
    }
}
