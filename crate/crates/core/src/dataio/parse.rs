use std::io::{BufRead, Read};

use crate::error::{Error, Result};

/// One observed rating, keyed by raw dataset identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingRecord {
    pub user_id: String,
    pub item_id: String,
    pub rating: f64,
    /// Carried through for completeness; no algorithm reads it.
    pub timestamp: Option<i64>,
}

/// What to do with a malformed line or row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ErrorPolicy {
    #[default]
    FailFast,
    Skip,
}

#[derive(Debug, Clone, Default)]
pub struct Parsed {
    pub records: Vec<RatingRecord>,
    /// Number of malformed lines dropped under [`ErrorPolicy::Skip`].
    pub skipped: usize,
}

impl Parsed {
    fn reject(&mut self, policy: ErrorPolicy, err: Error) -> Result<()> {
        match policy {
            ErrorPolicy::FailFast => Err(err),
            ErrorPolicy::Skip => {
                self.skipped += 1;
                Ok(())
            }
        }
    }
}

fn parse_error(line: usize, text: &str, reason: impl Into<String>) -> Error {
    Error::Parse { line, text: text.to_string(), reason: reason.into() }
}

fn parse_rating(raw: &str) -> Option<f64> {
    raw.trim().parse::<f64>().ok().filter(|r| r.is_finite())
}

fn parse_movielens_line(line: &str, lineno: usize) -> Result<RatingRecord> {
    let fields: Vec<&str> = line.split("::").collect();
    if fields.len() != 4 {
        return Err(parse_error(lineno, line, format!("expected 4 `::`-separated fields, found {}", fields.len())));
    }
    let (user, item) = (fields[0].trim(), fields[1].trim());
    if user.is_empty() || item.is_empty() {
        return Err(parse_error(lineno, line, "empty user or item id"));
    }
    let rating = parse_rating(fields[2]).ok_or_else(|| parse_error(lineno, line, "rating is not a finite number"))?;
    let timestamp =
        fields[3].trim().parse::<i64>().map_err(|_| parse_error(lineno, line, "timestamp is not an integer"))?;
    Ok(RatingRecord { user_id: user.to_string(), item_id: item.to_string(), rating, timestamp: Some(timestamp) })
}

/// Parse the MovieLens `UserID::MovieID::Rating::Timestamp` format.
///
/// Blank lines are ignored. Line numbers in errors are 1-based.
pub fn parse_movielens<R: BufRead>(source: R, policy: ErrorPolicy) -> Result<Parsed> {
    let mut parsed = Parsed::default();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        match parse_movielens_line(line, idx + 1) {
            Ok(record) => parsed.records.push(record),
            Err(err) => parsed.reject(policy, err)?,
        }
    }
    Ok(parsed)
}

/// Header names of the user, item and rating columns in a delimited file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub user: String,
    pub item: String,
    pub rating: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        // LDOS-CoMoDa naming.
        ColumnMap { user: "userID".into(), item: "itemID".into(), rating: "rating".into() }
    }
}

/// Parse a delimited file with a header row. Columns other than the three
/// mapped ones are ignored.
pub fn parse_csv<R: Read>(source: R, columns: &ColumnMap, delimiter: u8, policy: ErrorPolicy) -> Result<Parsed> {
    let mut reader =
        csv::ReaderBuilder::new().delimiter(delimiter).flexible(true).has_headers(true).from_reader(source);

    let headers = reader.headers()?.clone();
    let position = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Config(format!("column {name:?} not found in header")))
    };
    let (user_col, item_col, rating_col) =
        (position(&columns.user)?, position(&columns.item)?, position(&columns.rating)?);

    let mut parsed = Parsed::default();
    let mut row = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut row) {
            Ok(false) => break,
            Ok(true) => {}
            Err(err) => {
                parsed.reject(policy, err.into())?;
                continue;
            }
        }
        let lineno = row.position().map(|p| p.line() as usize).unwrap_or(0);
        if row.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let text = || row.iter().collect::<Vec<_>>().join(&(delimiter as char).to_string());
        let user = row.get(user_col).map(str::trim).unwrap_or("");
        let item = row.get(item_col).map(str::trim).unwrap_or("");
        if user.is_empty() || item.is_empty() {
            parsed.reject(policy, parse_error(lineno, &text(), "missing user or item id"))?;
            continue;
        }
        let Some(rating) = row.get(rating_col).and_then(parse_rating) else {
            parsed.reject(policy, parse_error(lineno, &text(), "rating is not a finite number"))?;
            continue;
        };
        parsed.records.push(RatingRecord {
            user_id: user.to_string(),
            item_id: item.to_string(),
            rating,
            timestamp: None,
        });
    }
    Ok(parsed)
}
