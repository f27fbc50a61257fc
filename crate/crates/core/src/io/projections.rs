use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::projection::{CategoryKind, CategorySchema, PlayerProjection};

const ID: &str = "player_id";
const NAME: &str = "player_name";
const ELIGIBILITY: &str = "eligibility";

/// Column layout expected for `schema`: id, name, one column per counting
/// category, a `_rate`/`_volume` pair per percentage category.
fn expected_header(schema: &CategorySchema) -> Vec<String> {
    let mut cols = vec![ID.to_string(), NAME.to_string()];
    for c in schema.iter() {
        match c.kind {
            CategoryKind::Counting => cols.push(c.name.clone()),
            CategoryKind::Percentage => {
                cols.push(format!("{}_rate", c.name));
                cols.push(format!("{}_volume", c.name));
            }
        }
    }
    cols
}

/// Reads projections in file order. Errors carry the offending line.
pub fn read_projections<R: Read>(
    reader: R,
    schema: &CategorySchema,
    source: &Path,
) -> Result<Vec<PlayerProjection>> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: source.to_path_buf(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let expected = expected_header(schema);
    let has_elig =
        header.len() == expected.len() + 1 && header.last().map(String::as_str) == Some(ELIGIBILITY);
    if header[..header.len().min(expected.len())] != expected[..]
        || !(header.len() == expected.len() || has_elig)
    {
        return Err(parse_err(
            1,
            format!("header {:?} does not match expected {:?}", header, expected),
        ));
    }

    let mut players: Vec<PlayerProjection> = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != header.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", header.len(), row.len()),
            ));
        }
        let number = |i: usize| -> Result<f64> {
            row[i].parse::<f64>().map_err(|_| {
                parse_err(
                    line,
                    format!("column {}: {:?} is not a number", header[i], &row[i]),
                )
            })
        };
        let mut stats = Vec::with_capacity(schema.len());
        let mut volumes = Vec::with_capacity(schema.len());
        let mut col = 2;
        for c in schema.iter() {
            stats.push(number(col)?);
            col += 1;
            if c.kind == CategoryKind::Percentage {
                volumes.push(number(col)?);
                col += 1;
            } else {
                volumes.push(0.0);
            }
        }
        let eligibility = if has_elig {
            row[col]
                .split(';')
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        } else {
            Vec::new()
        };
        let p = PlayerProjection {
            id: row[0].to_string(),
            name: row[1].to_string(),
            stats,
            volumes,
            eligibility,
        };
        if p.id.is_empty() {
            return Err(parse_err(line, "empty player_id".into()));
        }
        p.validate(schema).map_err(|e| parse_err(line, e.to_string()))?;
        if players.iter().any(|q| q.id == p.id) {
            return Err(parse_err(line, format!("duplicate player_id {}", p.id)));
        }
        players.push(p);
    }
    Ok(players)
}

pub fn load_projections(path: &Path, schema: &CategorySchema) -> Result<Vec<PlayerProjection>> {
    read_projections(File::open(path)?, schema, path)
}

pub fn write_projections<W: Write>(
    writer: W,
    schema: &CategorySchema,
    players: &[PlayerProjection],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = expected_header(schema);
    header.push(ELIGIBILITY.to_string());
    w.write_record(&header)?;
    for p in players {
        p.validate(schema)?;
        let mut rec = vec![p.id.clone(), p.name.clone()];
        for (c, cat) in schema.iter().enumerate() {
            rec.push(p.stats[c].to_string());
            if cat.kind == CategoryKind::Percentage {
                rec.push(p.volumes[c].to_string());
            }
        }
        rec.push(p.eligibility.join(";"));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_projections(path: &Path, schema: &CategorySchema, players: &[PlayerProjection]) -> Result<()> {
    write_projections(File::create(path)?, schema, players)
}
