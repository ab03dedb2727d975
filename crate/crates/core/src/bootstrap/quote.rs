//! Market instrument quotes and the quote CSV format.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timegrid::{Date, DayCount};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InstrumentKind {
    Deposit,
    Fra,
    Futures,
    Swap,
    BasisSwap,
    Ois,
}

impl InstrumentKind {
    pub fn name(self) -> &'static str {
        match self {
            InstrumentKind::Deposit => "DEPOSIT",
            InstrumentKind::Fra => "FRA",
            InstrumentKind::Futures => "FUTURES",
            InstrumentKind::Swap => "SWAP",
            InstrumentKind::BasisSwap => "BASIS_SWAP",
            InstrumentKind::Ois => "OIS",
        }
    }

    /// Liquidity rank used when two instruments share a pillar date.
    pub fn precedence(self) -> u8 {
        match self {
            InstrumentKind::Deposit => 0,
            InstrumentKind::Fra | InstrumentKind::Futures => 1,
            InstrumentKind::Swap | InstrumentKind::BasisSwap | InstrumentKind::Ois => 2,
        }
    }

    /// Single-period instruments fixing one simple forward.
    pub fn is_simple(self) -> bool {
        matches!(
            self,
            InstrumentKind::Deposit | InstrumentKind::Fra | InstrumentKind::Futures
        )
    }
}

impl fmt::Display for InstrumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstrumentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "DEPOSIT" | "DEPO" => Ok(InstrumentKind::Deposit),
            "FRA" => Ok(InstrumentKind::Fra),
            "FUTURES" | "FUTURE" => Ok(InstrumentKind::Futures),
            "SWAP" | "IRS" => Ok(InstrumentKind::Swap),
            "BASIS_SWAP" | "BASIS" => Ok(InstrumentKind::BasisSwap),
            "OIS" => Ok(InstrumentKind::Ois),
            other => Err(Error::InvalidQuote(format!("unknown instrument kind '{other}'"))),
        }
    }
}

/// One bootstrapping or hedging instrument.
///
/// Rates and spreads are decimals (0.025 = 2.5%); futures are quoted as
/// prices `100 - 100 r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstrumentQuote {
    pub kind: InstrumentKind,
    pub underlying_tenor: i32,
    pub start: Date,
    pub end: Date,
    pub quote: f64,
    /// Fixed leg period in months (swaps and OIS); 0 otherwise.
    pub fixed_leg_frequency: i32,
    pub leg_daycount: DayCount,
    /// Tenor of the second floating leg (basis swaps only).
    pub second_tenor: Option<i32>,
}

impl InstrumentQuote {
    pub fn deposit(start: Date, end: Date, rate: f64, tenor: i32, dc: DayCount) -> Self {
        Self::simple(InstrumentKind::Deposit, start, end, rate, tenor, dc)
    }

    pub fn fra(start: Date, end: Date, rate: f64, tenor: i32, dc: DayCount) -> Self {
        Self::simple(InstrumentKind::Fra, start, end, rate, tenor, dc)
    }

    /// Futures from the implied rate; stores the price `100 - 100 r`.
    pub fn futures(start: Date, end: Date, rate: f64, tenor: i32, dc: DayCount) -> Self {
        Self::simple(InstrumentKind::Futures, start, end, 100.0 - 100.0 * rate, tenor, dc)
    }

    fn simple(kind: InstrumentKind, start: Date, end: Date, quote: f64, tenor: i32, dc: DayCount) -> Self {
        InstrumentQuote {
            kind,
            underlying_tenor: tenor,
            start,
            end,
            quote,
            fixed_leg_frequency: 0,
            leg_daycount: dc,
            second_tenor: None,
        }
    }

    pub fn swap(start: Date, end: Date, rate: f64, float_tenor: i32, fixed_freq: i32, dc: DayCount) -> Self {
        InstrumentQuote {
            kind: InstrumentKind::Swap,
            underlying_tenor: float_tenor,
            start,
            end,
            quote: rate,
            fixed_leg_frequency: fixed_freq,
            leg_daycount: dc,
            second_tenor: None,
        }
    }

    pub fn ois(start: Date, end: Date, rate: f64, fixed_freq: i32, dc: DayCount) -> Self {
        InstrumentQuote {
            kind: InstrumentKind::Ois,
            underlying_tenor: fixed_freq,
            start,
            end,
            quote: rate,
            fixed_leg_frequency: fixed_freq,
            leg_daycount: dc,
            second_tenor: None,
        }
    }

    /// `tenor` is the leg forwarded on the curve this quote calibrates.
    pub fn basis_swap(start: Date, end: Date, spread: f64, tenor: i32, second_tenor: i32, dc: DayCount) -> Self {
        InstrumentQuote {
            kind: InstrumentKind::BasisSwap,
            underlying_tenor: tenor,
            start,
            end,
            quote: spread,
            fixed_leg_frequency: 0,
            leg_daycount: dc,
            second_tenor: Some(second_tenor),
        }
    }

    /// The quote expressed as a rate: futures prices are converted.
    pub fn quoted_rate(&self) -> f64 {
        match self.kind {
            InstrumentKind::Futures => (100.0 - self.quote) / 100.0,
            _ => self.quote,
        }
    }

    /// The par rate mapped back to quote units.
    pub fn rate_to_quote(&self, rate: f64) -> f64 {
        match self.kind {
            InstrumentKind::Futures => 100.0 - 100.0 * rate,
            _ => rate,
        }
    }

    /// Copy with the quote moved by `shift` in rate terms.
    pub fn bumped(&self, shift: f64) -> InstrumentQuote {
        let mut q = self.clone();
        q.quote = self.rate_to_quote(self.quoted_rate() + shift);
        q
    }

    pub fn pillar_date(&self) -> Date {
        self.end
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::InvalidQuote(format!("{} {}..{}: {m}", self.kind, self.start, self.end)));
        if self.start >= self.end {
            return err("start must precede end".into());
        }
        if !self.quote.is_finite() {
            return err("quote is not finite".into());
        }
        if self.underlying_tenor <= 0 {
            return err(format!("underlying tenor {} is not positive", self.underlying_tenor));
        }
        match self.kind {
            InstrumentKind::Swap | InstrumentKind::Ois if self.fixed_leg_frequency <= 0 => {
                err("missing fixed leg frequency".into())
            }
            InstrumentKind::BasisSwap => match self.second_tenor {
                Some(t) if t > 0 => Ok(()),
                _ => err("basis swap needs a second tenor".into()),
            },
            _ => Ok(()),
        }
    }

    /// Human-readable identifier, e.g. `SWAP 6M 2009-02-18..2014-02-18`.
    pub fn label(&self) -> String {
        match self.kind {
            InstrumentKind::BasisSwap => format!(
                "{} {}M/{}M {}..{}",
                self.kind,
                self.underlying_tenor,
                self.second_tenor.unwrap_or(0),
                self.start,
                self.end
            ),
            _ => format!("{} {}M {}..{}", self.kind, self.underlying_tenor, self.start, self.end),
        }
    }
}

pub const QUOTE_CSV_HEADER: &str =
    "kind,underlying_tenor_months,start,end,quote,fixed_freq_months,leg_daycount,second_tenor_months";

#[derive(Debug, Deserialize, Serialize)]
struct QuoteRow {
    kind: String,
    underlying_tenor_months: i32,
    start: String,
    end: String,
    quote: f64,
    fixed_freq_months: Option<i32>,
    leg_daycount: String,
    second_tenor_months: Option<i32>,
}

/// Parses the quote CSV; lines starting with `#` are comments.
pub fn parse_quotes_csv(text: &str) -> Result<Vec<InstrumentQuote>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
        .clone();
    let expected: Vec<&str> = QUOTE_CSV_HEADER.split(',').collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header '{QUOTE_CSV_HEADER}'"),
        });
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let row: QuoteRow = rec
            .deserialize(Some(&headers))
            .map_err(|e| Error::Parse { line, message: e.to_string() })?;
        let perr = |e: Error| Error::Parse { line, message: e.to_string() };
        let q = InstrumentQuote {
            kind: row.kind.parse().map_err(perr)?,
            underlying_tenor: row.underlying_tenor_months,
            start: row.start.parse().map_err(perr)?,
            end: row.end.parse().map_err(perr)?,
            quote: row.quote,
            fixed_leg_frequency: row.fixed_freq_months.unwrap_or(0),
            leg_daycount: row.leg_daycount.parse().map_err(perr)?,
            second_tenor: row.second_tenor_months,
        };
        q.validate().map_err(perr)?;
        out.push(q);
    }
    Ok(out)
}

pub fn write_quotes_csv(quotes: &[InstrumentQuote]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for q in quotes {
        w.write_record([
            q.kind.name().to_string(),
            q.underlying_tenor.to_string(),
            q.start.to_string(),
            q.end.to_string(),
            format!("{}", q.quote),
            if q.fixed_leg_frequency > 0 { q.fixed_leg_frequency.to_string() } else { String::new() },
            q.leg_daycount.name().to_string(),
            q.second_tenor.map(|t| t.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory csv write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf8");
    format!("{QUOTE_CSV_HEADER}\n{body}")
}
