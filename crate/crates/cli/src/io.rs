//! Point files.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use tverberg::geom::parse_rational;
use tverberg::{Point, PointSet, Rational};

use crate::Failure;

fn parse_coords<'a>(fields: impl Iterator<Item = &'a str>, what: &str) -> Result<Vec<Rational>, Failure> {
    fields
        .map(|f| parse_rational(f).ok_or_else(|| Failure::Parse(format!("{what}: bad number {f:?}"))))
        .collect()
}

/// Parses a comma separated point such as `1/2,0.5`.
pub fn parse_point(s: &str) -> Result<Point, Failure> {
    Ok(Point::new(parse_coords(s.split(','), "point")?))
}

fn build(dim: Option<usize>, rows: Vec<Vec<Rational>>) -> Result<PointSet, Failure> {
    let points: Vec<Point> = rows.into_iter().map(Point::new).collect();
    let set = match dim {
        Some(d) => PointSet::with_dim(d, points),
        None if points.is_empty() => return Err(Failure::Parse("no points and no dimension".into())),
        None => PointSet::new(points),
    };
    set.map_err(|e| Failure::Parse(e.to_string()))
}

fn read_csv(text: &str) -> Result<PointSet, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut dim = None;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if line == 0 && record.len() == 1 {
            if let Some(d) = record[0].strip_prefix("dim=") {
                dim = Some(d.trim().parse().map_err(|_| Failure::Parse(format!("bad header {:?}", &record[0])))?);
                continue;
            }
        }
        rows.push(parse_coords(record.iter(), &format!("record {}", line + 1))?);
    }
    build(dim, rows)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonNumber {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonPoints {
    Bare(Vec<Vec<JsonNumber>>),
    Full { dim: Option<usize>, points: Vec<Vec<JsonNumber>> },
}

fn read_json(text: &str) -> Result<PointSet, Failure> {
    let parsed: JsonPoints = serde_json::from_str(text).map_err(|e| Failure::Parse(e.to_string()))?;
    let (dim, raw) = match parsed {
        JsonPoints::Bare(p) => (None, p),
        JsonPoints::Full { dim, points } => (dim, points),
    };
    let rows = raw
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let texts: Vec<String> = p
                .iter()
                .map(|c| match c {
                    JsonNumber::Text(s) => s.clone(),
                    JsonNumber::Number(x) => x.to_string(),
                })
                .collect();
            parse_coords(texts.iter().map(String::as_str), &format!("point {i}"))
        })
        .collect::<Result<_, _>>()?;
    build(dim, rows)
}

/// Reads a point file: JSON when it starts with `[` or `{`, CSV otherwise.
pub fn read_points(path: &Path) -> Result<PointSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    match text.trim_start().chars().next() {
        Some('[' | '{') => read_json(&text),
        _ => read_csv(&text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_header_and_fractions() {
        let set = read_csv("dim=2\n1/2, 0.25\n# comment\n-3,4e1\n").unwrap();
        assert_eq!(set.dim(), 2);
        assert_eq!(set.point(0), &parse_point("1/2,1/4").unwrap());
        assert_eq!(set.point(1), &parse_point("-3,40").unwrap());
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        assert!(read_csv("1,2\n3\n").is_err());
        assert!(read_csv("dim=3\n1,2\n").is_err());
        assert!(read_csv("1,x\n").is_err());
    }

    #[test]
    fn json_both_shapes() {
        let a = read_json(r#"[[0, "1/2"], [1.5, 2]]"#).unwrap();
        let b = read_json(r#"{"dim": 2, "points": [["0", "1/2"], ["3/2", "2"]]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(read_json(r#"{"dim": 3, "points": []}"#).unwrap().dim(), 3);
    }
}
