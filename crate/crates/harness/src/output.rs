//! CSV schema: one row per observation time.
//!
//! `t, phase, dist_lower, dist_upper, aux_density, cesaro_lower, cesaro_upper, seg_count, seg_min,
//! seg_median, seg_max, swept, tail`, then `p[u]` for every word `u` of length `N` over `B ∪ {*}`.
//! Each rational column is followed by a `_dec` column with the value to 6 decimal places.
//! Missing values are empty.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use lm_measures::{fmt_q, parse_q, to_f64, Alphabet, CylinderTable, Q};
use num_traits::Zero;

use crate::run::{SegmentStats, TimeSeriesRow};
use crate::HarnessError;

/// What fixes the column set.
#[derive(Clone, Debug)]
pub struct CsvLayout {
    pub alphabet: Alphabet,
    pub depth: usize,
}

const RATIONAL: [&str; 7] = ["dist_lower", "dist_upper", "aux_density", "cesaro_lower", "cesaro_upper", "swept", "tail"];

impl CsvLayout {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string(), "phase".into()];
        for name in &RATIONAL[..5] {
            h.push(name.to_string());
            h.push(format!("{name}_dec"));
        }
        h.extend(["seg_count", "seg_min", "seg_median", "seg_max"].map(String::from));
        for name in &RATIONAL[5..] {
            h.push(name.to_string());
            h.push(format!("{name}_dec"));
        }
        for w in self.alphabet.words(self.depth) {
            let p = format!("p[{}]", self.alphabet.format_word(&w));
            h.push(format!("{p}_dec"));
            h.insert(h.len() - 1, p);
        }
        h
    }
}

fn rational(out: &mut Vec<String>, x: Option<&Q>) {
    match x {
        Some(x) => {
            out.push(fmt_q(x));
            out.push(format!("{:.6}", to_f64(x)));
        }
        None => out.extend([String::new(), String::new()]),
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

fn record(row: &TimeSeriesRow, layout: &CsvLayout) -> Result<Vec<String>, HarnessError> {
    if row.table.depth() != layout.depth {
        return Err(HarnessError::DepthMismatch(layout.depth, row.table.depth()));
    }
    let mut r = vec![row.t.to_string(), opt(row.phase)];
    rational(&mut r, Some(&row.distance.0));
    rational(&mut r, Some(&row.distance.1));
    rational(&mut r, Some(&row.aux_density));
    rational(&mut r, row.cesaro.as_ref().map(|c| &c.0));
    rational(&mut r, row.cesaro.as_ref().map(|c| &c.1));
    let s = &row.segments;
    r.extend([s.count.to_string(), opt(s.min), opt(s.median), opt(s.max)]);
    rational(&mut r, Some(&s.swept));
    rational(&mut r, Some(&s.tail));
    for x in row.table.level(layout.depth) {
        rational(&mut r, Some(x));
    }
    Ok(r)
}

pub fn emit_csv(rows: &[TimeSeriesRow], layout: &CsvLayout, out: impl Write) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| HarnessError::Csv(e.to_string());
    w.write_record(layout.header()).map_err(csv_err)?;
    for row in rows {
        w.write_record(record(row, layout)?).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(rows: &[TimeSeriesRow], layout: &CsvLayout, path: &Path) -> Result<(), HarnessError> {
    emit_csv(rows, layout, File::create(path)?)
}

/// Parses rows written by [`emit_csv`]. Shorter cylinders are recovered as marginals of level `N`.
pub fn read_csv(text: &str, layout: &CsvLayout) -> Result<Vec<TimeSeriesRow>, HarnessError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> =
        rd.headers().map_err(|e| HarnessError::Csv(e.to_string()))?.iter().map(String::from).collect();
    if header != layout.header() {
        return Err(HarnessError::Csv("header does not match the layout".into()));
    }
    let bad = |c: &str, v: &str| HarnessError::Csv(format!("column {c}: bad value {v:?}"));
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| HarnessError::Csv(e.to_string()))?;
        let field = |name: &str| -> &str { &rec[header.iter().position(|h| h == name).unwrap()] };
        let int = |name: &str| -> Result<Option<u64>, HarnessError> {
            let v = field(name);
            if v.is_empty() {
                Ok(None)
            } else {
                v.parse().map(Some).map_err(|_| bad(name, v))
            }
        };
        let rat = |name: &str| -> Result<Option<Q>, HarnessError> {
            let v = field(name);
            if v.is_empty() {
                Ok(None)
            } else {
                parse_q(v).map(Some).map_err(|_| bad(name, v))
            }
        };
        let req = |name: &str| -> Result<Q, HarnessError> { rat(name)?.ok_or_else(|| bad(name, "")) };

        let k = layout.alphabet.size();
        let mut levels: Vec<Vec<Q>> = vec![Vec::new(); layout.depth + 1];
        levels[layout.depth] = layout
            .alphabet
            .words(layout.depth)
            .map(|w| req(&format!("p[{}]", layout.alphabet.format_word(&w))))
            .collect::<Result<_, _>>()?;
        for n in (0..layout.depth).rev() {
            levels[n] = (0..layout.alphabet.count(n))
                .map(|r| (0..k).fold(Q::zero(), |acc, c| acc + &levels[n + 1][r * k + c]))
                .collect();
        }
        let cesaro = match (rat("cesaro_lower")?, rat("cesaro_upper")?) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        let t = int("t")?.ok_or_else(|| bad("t", ""))?;
        rows.push(TimeSeriesRow {
            t,
            phase: int("phase")?,
            table: CylinderTable::from_levels(&layout.alphabet, levels)?,
            distance: (req("dist_lower")?, req("dist_upper")?),
            aux_density: req("aux_density")?,
            cesaro,
            segments: SegmentStats {
                count: int("seg_count")?.unwrap_or(0) as usize,
                min: int("seg_min")?.map(|x| x as usize),
                median: int("seg_median")?.map(|x| x as usize),
                max: int("seg_max")?.map(|x| x as usize),
                swept: req("swept")?,
                tail: req("tail")?,
            },
        });
    }
    Ok(rows)
}
