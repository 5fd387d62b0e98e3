//! Multivariate daily price panels.
//!
//! Input is a wide CSV: a header `date,TICKER1,...,TICKERk` followed by one
//! row per trading day with ISO-8601 dates. Rows with any missing cell are
//! dropped (row intersection); no interpolation is ever performed. Dates are
//! treated as ordered labels only.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use nalgebra::DMatrix;

use crate::error::{Error, Result};

const DATE_FORMAT: &str = "%Y-%m-%d";

/// Aligned price history: `T` timestamps by `k` assets, all prices positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PricePanel {
    timestamps: Vec<NaiveDate>,
    tickers: Vec<String>,
    prices: DMatrix<f64>,
}

/// Column selection for [`load_csv`].
#[derive(Debug, Clone, Default)]
pub struct CsvSchema {
    /// Header name of the date column; `None` means the first column.
    pub date_column: Option<String>,
    /// Tickers to keep, in this order; `None` keeps every non-date column in
    /// header order.
    pub tickers: Option<Vec<String>>,
}

impl PricePanel {
    pub fn new(timestamps: Vec<NaiveDate>, tickers: Vec<String>, prices: DMatrix<f64>) -> Result<Self> {
        if tickers.len() < 2 {
            return Err(Error::TooFewTickers(tickers.len()));
        }
        if prices.ncols() != tickers.len() || prices.nrows() != timestamps.len() {
            return Err(Error::invalid(format!(
                "price matrix is {}x{} but panel has {} dates and {} tickers",
                prices.nrows(),
                prices.ncols(),
                timestamps.len(),
                tickers.len()
            )));
        }
        if timestamps.is_empty() {
            return Err(Error::NoOverlap);
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedTimestamps(i + 1));
        }
        for i in 0..prices.nrows() {
            for j in 0..prices.ncols() {
                let v = prices[(i, j)];
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::NonPositivePrice {
                        ticker: tickers[j].clone(),
                        date: timestamps[i].format(DATE_FORMAT).to_string(),
                        value: v,
                    });
                }
            }
        }
        Ok(Self { timestamps, tickers, prices })
    }

    /// Number of rows (trading days).
    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Number of assets `k`.
    pub fn n_assets(&self) -> usize {
        self.tickers.len()
    }

    pub fn timestamps(&self) -> &[NaiveDate] {
        &self.timestamps
    }

    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    pub fn prices(&self) -> &DMatrix<f64> {
        &self.prices
    }

    pub fn log_price(&self, row: usize, asset: usize) -> f64 {
        self.prices[(row, asset)].ln()
    }

    /// Natural-log prices of one row.
    pub fn log_row(&self, row: usize) -> Vec<f64> {
        (0..self.n_assets()).map(|j| self.log_price(row, j)).collect()
    }

    /// Log matrix of a formation window: `(L+1) x k`, row `i` holding
    /// `log X` at index `end_index - L + i`.
    pub fn log_window(&self, end_index: usize, length: usize) -> Result<DMatrix<f64>> {
        FormationWindow::new(self, end_index, length)?.log_matrix()
    }

    /// The panel restricted to rows `0..=last`.
    pub fn truncated(&self, last: usize) -> Result<Self> {
        if last >= self.len() {
            return Err(Error::WindowOutOfRange {
                start: 0,
                end: last,
                len: self.len(),
            });
        }
        Ok(Self {
            timestamps: self.timestamps[..=last].to_vec(),
            tickers: self.tickers.clone(),
            prices: self.prices.rows(0, last + 1).into_owned(),
        })
    }

    /// Writes the panel in the wide CSV format. Floats use the shortest
    /// round-tripping representation, so reloading is exact.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_to(file).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn write_to<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec!["date".to_string()];
        header.extend(self.tickers.iter().cloned());
        out.write_record(&header)?;
        for (i, date) in self.timestamps.iter().enumerate() {
            let mut record = vec![date.format(DATE_FORMAT).to_string()];
            record.extend((0..self.n_assets()).map(|j| format!("{}", self.prices[(i, j)])));
            out.write_record(&record)?;
        }
        out.flush()
    }
}

/// The trailing `L + 1` rows ending at `end_index`.
#[derive(Debug, Clone, Copy)]
pub struct FormationWindow<'a> {
    pub panel: &'a PricePanel,
    pub end_index: usize,
    pub length: usize,
}

impl<'a> FormationWindow<'a> {
    pub fn new(panel: &'a PricePanel, end_index: usize, length: usize) -> Result<Self> {
        if end_index < length || end_index >= panel.len() {
            return Err(Error::WindowOutOfRange {
                start: end_index as isize - length as isize,
                end: end_index,
                len: panel.len(),
            });
        }
        Ok(Self { panel, end_index, length })
    }

    pub fn start_index(&self) -> usize {
        self.end_index - self.length
    }

    pub fn log_matrix(&self) -> Result<DMatrix<f64>> {
        let start = self.start_index();
        let k = self.panel.n_assets();
        Ok(DMatrix::from_fn(self.length + 1, k, |i, j| {
            self.panel.log_price(start + i, j)
        }))
    }
}

/// Loads a wide CSV, keeping only dates where every selected ticker has a value.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<PricePanel> {
    let table = read_table(path, schema)?;
    assemble(vec![table])
}

/// Loads several wide CSVs and aligns them on the intersection of their dates.
/// Tickers are concatenated in file order and must be unique.
pub fn load_many(paths: &[&Path], schema: &CsvSchema) -> Result<PricePanel> {
    let tables = paths
        .iter()
        .map(|p| read_table(p, schema))
        .collect::<Result<Vec<_>>>()?;
    assemble(tables)
}

struct RawTable {
    tickers: Vec<String>,
    // date -> one optional cell per ticker
    rows: BTreeMap<NaiveDate, Vec<Option<f64>>>,
}

fn read_table(path: &Path, schema: &CsvSchema) -> Result<RawTable> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();

    let date_col = match &schema.date_column {
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::invalid(format!("date column '{name}' not in header")))?,
        None => 0,
    };
    let columns: Vec<(usize, String)> = match &schema.tickers {
        Some(wanted) => wanted
            .iter()
            .map(|t| {
                header
                    .iter()
                    .position(|h| h == t)
                    .map(|i| (i, t.clone()))
                    .ok_or_else(|| Error::invalid(format!("ticker '{t}' not in header")))
            })
            .collect::<Result<_>>()?,
        None => header
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != date_col)
            .map(|(i, h)| (i, h.clone()))
            .collect(),
    };
    let mut rows = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let raw_date = record.get(date_col).unwrap_or("");
        let date = NaiveDate::parse_from_str(raw_date, DATE_FORMAT).map_err(|e| Error::Parse {
            line,
            message: format!("bad date '{raw_date}': {e}"),
        })?;
        let mut cells = Vec::with_capacity(columns.len());
        for (col, ticker) in &columns {
            let cell = record.get(*col).unwrap_or("");
            if cell.is_empty() || cell.eq_ignore_ascii_case("nan") || cell.eq_ignore_ascii_case("na") {
                cells.push(None);
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad number '{cell}' for {ticker}"),
            })?;
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositivePrice {
                    ticker: ticker.clone(),
                    date: raw_date.to_string(),
                    value,
                });
            }
            cells.push(Some(value));
        }
        if rows.insert(date, cells).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("duplicate date {raw_date}"),
            });
        }
    }
    Ok(RawTable {
        tickers: columns.into_iter().map(|(_, t)| t).collect(),
        rows,
    })
}

fn assemble(tables: Vec<RawTable>) -> Result<PricePanel> {
    let tickers: Vec<String> = tables.iter().flat_map(|t| t.tickers.iter().cloned()).collect();
    if tickers.len() < 2 {
        return Err(Error::TooFewTickers(tickers.len()));
    }
    for (i, t) in tickers.iter().enumerate() {
        if tickers[..i].contains(t) {
            return Err(Error::invalid(format!("duplicate ticker '{t}'")));
        }
    }

    let mut dates = Vec::new();
    let mut values = Vec::new();
    let Some(first) = tables.first() else {
        return Err(Error::NoOverlap);
    };
    'dates: for date in first.rows.keys() {
        let mut row = Vec::with_capacity(tickers.len());
        for table in &tables {
            match table.rows.get(date) {
                Some(cells) if cells.iter().all(Option::is_some) => {
                    row.extend(cells.iter().map(|c| c.unwrap()));
                }
                _ => continue 'dates,
            }
        }
        dates.push(*date);
        values.extend(row);
    }
    if dates.is_empty() {
        return Err(Error::NoOverlap);
    }
    let prices = DMatrix::from_row_slice(dates.len(), tickers.len(), &values);
    PricePanel::new(dates, tickers, prices)
}
