//! Serialized certificates and benchmark tables.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TverbergError};
use crate::generate::{generate, Family};
use crate::geom::{format_rational, parse_rational, Point};
use crate::kernel::ConvexCombination;
use crate::sites::{Batch, Site};
use crate::solve::{rank_bound, solve, Algorithm, SolveOptions};
use crate::verify::verify_site;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertBatch {
    pub indices: Vec<usize>,
    pub weights: BTreeMap<usize, String>,
}

/// A site with exact `"num/den"` rationals, self-contained given the point
/// file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub point: Vec<String>,
    pub batches: Vec<CertBatch>,
    pub unused: Vec<usize>,
    #[serde(default)]
    pub algo: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub paper_bound: usize,
}

fn parse_all<'a>(texts: impl Iterator<Item = &'a String>, what: &str) -> Result<Vec<crate::Rational>> {
    texts
        .map(|t| parse_rational(t).ok_or_else(|| TverbergError::Precondition(format!("{what}: bad rational {t:?}"))))
        .collect()
}

impl Certificate {
    pub fn from_site(site: &Site, algo: &str, seed: u64, paper_bound: usize) -> Self {
        Certificate {
            point: site.point.coords().iter().map(format_rational).collect(),
            batches: site
                .log
                .batches
                .iter()
                .map(|b| CertBatch {
                    indices: b.indices.clone(),
                    weights: b.witness.weights.iter().map(|(&i, w)| (i, format_rational(w))).collect(),
                })
                .collect(),
            unused: site.unused.clone(),
            algo: algo.to_string(),
            seed,
            paper_bound,
        }
    }

    /// The site the certificate describes. Malformed rationals are reported
    /// as precondition errors; nothing else is checked here.
    pub fn to_site(&self) -> Result<Site> {
        let point = Point::new(parse_all(self.point.iter(), "point")?);
        let batches = self
            .batches
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let values = parse_all(b.weights.values(), &format!("batch {j}"))?;
                let weights = b.weights.keys().copied().zip(values).collect();
                Ok(Batch::new(b.indices.clone(), ConvexCombination { weights, target: point.clone() }))
            })
            .collect::<Result<_>>()?;
        Ok(Site::new(point, batches, self.unused.clone()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| TverbergError::Precondition(format!("certificate: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }
}

/// One benchmark instance: a generated set and an algorithm seeded alike.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    pub algo: Algorithm,
    pub seed: u64,
}

impl Cell {
    fn key(&self) -> (Family, usize, usize, Algorithm, u64) {
        (self.family, self.d, self.n, self.algo, self.seed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Precondition or scale cap.
    Refused,
    Failed,
    /// The certificate did not verify.
    Invalid,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Refused => "refused",
            Status::Failed => "failed",
            Status::Invalid => "invalid",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub cell: Cell,
    pub status: Status,
    pub rank: usize,
    pub bound: usize,
    pub millis: u128,
}

pub fn run_cell(cell: Cell, opts: &SolveOptions) -> Result<Row> {
    let set = generate(cell.family, cell.n, cell.d, cell.seed)?;
    let opts = SolveOptions { seed: cell.seed, ..opts.clone() };
    let bound = rank_bound(cell.algo, cell.n, cell.d, opts.delta);
    let start = Instant::now();
    let result = solve(cell.algo, &set, &opts);
    let millis = start.elapsed().as_millis();
    let (status, rank) = match result {
        Ok(site) => (if verify_site(&set, &site).valid { Status::Ok } else { Status::Invalid }, site.rank()),
        Err(e) if e.is_precondition() => (Status::Refused, 0),
        Err(_) => (Status::Failed, 0),
    };
    Ok(Row { cell, status, rank, bound, millis })
}

pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| a.cell.key().cmp(&b.cell.key()));
}

/// Writes `family,d,n,algo,seed,status,rank,bound,ratio` and, with
/// `timing`, `millis`.
pub fn write_table(rows: &[Row], timing: bool, out: impl Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["family", "d", "n", "algo", "seed", "status", "rank", "bound", "ratio"];
    if timing {
        header.push("millis");
    }
    w.write_record(&header)?;
    for r in rows {
        let ratio = if r.bound == 0 { String::new() } else { format!("{:.4}", r.rank as f64 / r.bound as f64) };
        let mut rec = vec![
            r.cell.family.to_string(),
            r.cell.d.to_string(),
            r.cell.n.to_string(),
            r.cell.algo.to_string(),
            r.cell.seed.to_string(),
            r.status.name().to_string(),
            r.rank.to_string(),
            r.bound.to_string(),
            ratio,
        ];
        if timing {
            rec.push(r.millis.to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()
}
