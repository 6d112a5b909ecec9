//! Trading-day calendars.
//!
//! Two sources: the exchange-style weekday/holiday rule used to lay out
//! synthetic market fixtures, and [`TradingCalendar`], built from the dates
//! actually present in an OHLCV series. All trading-day arithmetic in the
//! pipeline (post roll-forward, lead times) uses the latter.

use chrono::{Datelike, NaiveDate, Weekday};

/// US equity market full-day closures, 2020 through 2022.
const US_HOLIDAYS: &[(i32, u32, u32)] = &[
    (2020, 1, 1),
    (2020, 1, 20),
    (2020, 2, 17),
    (2020, 4, 10),
    (2020, 5, 25),
    (2020, 7, 3),
    (2020, 9, 7),
    (2020, 11, 26),
    (2020, 12, 25),
    (2021, 1, 1),
    (2021, 1, 18),
    (2021, 2, 15),
    (2021, 4, 2),
    (2021, 5, 31),
    (2021, 7, 5),
    (2021, 9, 6),
    (2021, 11, 25),
    (2021, 12, 24),
    (2022, 1, 17),
    (2022, 2, 21),
    (2022, 4, 15),
    (2022, 5, 30),
    (2022, 6, 20),
    (2022, 7, 4),
    (2022, 9, 5),
    (2022, 11, 24),
    (2022, 12, 26),
];

pub fn is_us_holiday(d: NaiveDate) -> bool {
    US_HOLIDAYS
        .iter()
        .any(|&(y, m, day)| d.year() == y && d.month() == m && d.day() == day)
}

pub fn is_weekend(d: NaiveDate) -> bool {
    matches!(d.weekday(), Weekday::Sat | Weekday::Sun)
}

/// Weekdays in `[start, end]` that are not listed US market holidays.
/// Outside 2020–2022 only weekends are excluded.
pub fn us_trading_days(start: NaiveDate, end: NaiveDate) -> Vec<NaiveDate> {
    start
        .iter_days()
        .take_while(|d| *d <= end)
        .filter(|d| !is_weekend(*d) && !is_us_holiday(*d))
        .collect()
}

/// Ordered set of trading days taken from market data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradingCalendar {
    days: Vec<NaiveDate>,
}

impl TradingCalendar {
    /// Builds a calendar; input is sorted and deduplicated.
    pub fn new(mut days: Vec<NaiveDate>) -> Self {
        days.sort_unstable();
        days.dedup();
        Self { days }
    }

    pub fn days(&self) -> &[NaiveDate] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    pub fn contains(&self, d: NaiveDate) -> bool {
        self.days.binary_search(&d).is_ok()
    }

    /// Position of `d` if it is a trading day.
    pub fn index_of(&self, d: NaiveDate) -> Option<usize> {
        self.days.binary_search(&d).ok()
    }

    /// First trading day on or after `d`; `None` past the last trading day.
    pub fn on_or_after(&self, d: NaiveDate) -> Option<NaiveDate> {
        let i = self.days.partition_point(|x| *x < d);
        self.days.get(i).copied()
    }

    /// Index of the first trading day on or after `d`.
    pub fn index_on_or_after(&self, d: NaiveDate) -> Option<usize> {
        let i = self.days.partition_point(|x| *x < d);
        (i < self.days.len()).then_some(i)
    }

    /// Number of trading days from `from` to `to` (positive when `from` is earlier).
    /// Both dates must be trading days.
    pub fn trading_days_between(&self, from: NaiveDate, to: NaiveDate) -> Option<i64> {
        let a = self.index_of(from)? as i64;
        let b = self.index_of(to)? as i64;
        Some(b - a)
    }
}
