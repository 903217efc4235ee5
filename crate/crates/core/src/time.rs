//! Calendar dates and millisecond timestamps.
//!
//! `Date` renders as `yyyy-mm-dd`; `DateTime` renders as
//! `yyyy-mm-ddTHH:MM:ss.sss+0000` and is stored as UTC epoch milliseconds.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ModelError;

pub const MILLIS_PER_SECOND: i64 = 1_000;
pub const MILLIS_PER_MINUTE: i64 = 60 * MILLIS_PER_SECOND;
pub const MILLIS_PER_HOUR: i64 = 60 * MILLIS_PER_MINUTE;
pub const MILLIS_PER_DAY: i64 = 24 * MILLIS_PER_HOUR;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Date(NaiveDate);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DateTime(i64);

impl Date {
    pub fn from_ymd(year: i32, month: u32, day: u32) -> Option<Date> {
        NaiveDate::from_ymd_opt(year, month, day).map(Date)
    }

    /// Panicking constructor for literals known to be valid.
    pub fn ymd(year: i32, month: u32, day: u32) -> Date {
        Date::from_ymd(year, month, day).unwrap_or_else(|| panic!("invalid date {year}-{month}-{day}"))
    }

    pub fn year(self) -> i32 {
        self.0.year()
    }

    pub fn month(self) -> u32 {
        self.0.month()
    }

    pub fn day(self) -> u32 {
        self.0.day()
    }

    /// Days since 1970-01-01.
    pub fn days_since_epoch(self) -> i64 {
        self.0.signed_duration_since(epoch()).num_days()
    }

    pub fn from_days_since_epoch(days: i64) -> Date {
        Date(epoch() + chrono::Duration::days(days))
    }

    /// The instant 00:00:00.000 of this day.
    pub fn to_datetime(self) -> DateTime {
        DateTime(self.days_since_epoch() * MILLIS_PER_DAY)
    }

    pub fn add_days(self, days: i64) -> Date {
        Date::from_days_since_epoch(self.days_since_epoch() + days)
    }

    pub fn succ(self) -> Date {
        self.add_days(1)
    }
}

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("epoch")
}

impl DateTime {
    pub const fn from_millis(millis: i64) -> DateTime {
        DateTime(millis)
    }

    pub const fn millis(self) -> i64 {
        self.0
    }

    pub fn date(self) -> Date {
        Date::from_days_since_epoch(self.0.div_euclid(MILLIS_PER_DAY))
    }

    pub fn year(self) -> i32 {
        self.date().year()
    }

    pub fn month(self) -> u32 {
        self.date().month()
    }

    pub fn plus_millis(self, millis: i64) -> DateTime {
        DateTime(self.0 + millis)
    }
}

impl From<Date> for DateTime {
    fn from(d: Date) -> DateTime {
        d.to_datetime()
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year(), self.month(), self.day())
    }
}

impl fmt::Display for DateTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.date();
        let ms = self.0.rem_euclid(MILLIS_PER_DAY);
        write!(
            f,
            "{}T{:02}:{:02}:{:02}.{:03}+0000",
            d,
            ms / MILLIS_PER_HOUR,
            (ms % MILLIS_PER_HOUR) / MILLIS_PER_MINUTE,
            (ms % MILLIS_PER_MINUTE) / MILLIS_PER_SECOND,
            ms % MILLIS_PER_SECOND
        )
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str, input: &str) -> Result<T, ModelError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ModelError::Parse(format!("bad {what} in {input:?}")));
    }
    s.parse().map_err(|_| ModelError::Parse(format!("bad {what} in {input:?}")))
}

impl FromStr for Date {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Date, ModelError> {
        let parts: Vec<&str> = s.split('-').collect();
        if parts.len() != 3 || parts[0].len() != 4 || parts[1].len() != 2 || parts[2].len() != 2 {
            return Err(ModelError::Parse(format!("expected yyyy-mm-dd, got {s:?}")));
        }
        let y = parse_num(parts[0], "year", s)?;
        let m = parse_num(parts[1], "month", s)?;
        let d = parse_num(parts[2], "day", s)?;
        Date::from_ymd(y, m, d).ok_or_else(|| ModelError::Parse(format!("no such date {s:?}")))
    }
}

impl FromStr for DateTime {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<DateTime, ModelError> {
        let bad = || ModelError::Parse(format!("expected yyyy-mm-ddTHH:MM:ss.sss+0000, got {s:?}"));
        if s.len() != 28 || !s.is_char_boundary(10) || &s[10..11] != "T" || &s[23..] != "+0000" {
            return Err(bad());
        }
        let date: Date = s[..10].parse()?;
        let clock = &s[11..23];
        if &clock[2..3] != ":" || &clock[5..6] != ":" || &clock[8..9] != "." {
            return Err(bad());
        }
        let h: i64 = parse_num(&clock[0..2], "hour", s)?;
        let mi: i64 = parse_num(&clock[3..5], "minute", s)?;
        let sec: i64 = parse_num(&clock[6..8], "second", s)?;
        let ms: i64 = parse_num(&clock[9..12], "millisecond", s)?;
        if h > 23 || mi > 59 || sec > 59 {
            return Err(bad());
        }
        Ok(DateTime(
            date.to_datetime().0 + h * MILLIS_PER_HOUR + mi * MILLIS_PER_MINUTE + sec * MILLIS_PER_SECOND + ms,
        ))
    }
}

impl Serialize for Date {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Date {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Date, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for DateTime {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DateTime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<DateTime, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of calendar months touched by the span from `from` to `to`,
/// counting partial months at both ends as whole months.
/// Returns 0 when `to` precedes `from`.
pub fn months_between(from: DateTime, to: DateTime) -> i64 {
    if to < from {
        return 0;
    }
    let (a, b) = (from.date(), to.date());
    (b.year() as i64 - a.year() as i64) * 12 + (b.month() as i64 - a.month() as i64) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_round_trip() {
        let t: DateTime = "2010-03-14T09:26:53.589+0000".parse().unwrap();
        assert_eq!(t.to_string(), "2010-03-14T09:26:53.589+0000");
        assert_eq!(Date::ymd(2012, 2, 29).to_string(), "2012-02-29");
        assert_eq!("2012-02-29".parse::<Date>().unwrap(), Date::ymd(2012, 2, 29));
    }

    #[test]
    fn rejects_malformed() {
        assert!("2012-2-29".parse::<Date>().is_err());
        assert!("2011-02-29".parse::<Date>().is_err());
        assert!("2010-03-14 09:26:53.589+0000".parse::<DateTime>().is_err());
        assert!("2010-03-14T25:26:53.589+0000".parse::<DateTime>().is_err());
    }

    #[test]
    fn date_compares_as_midnight() {
        let d = Date::ymd(2011, 5, 1);
        let t: DateTime = "2011-05-01T00:00:00.000+0000".parse().unwrap();
        assert_eq!(d.to_datetime(), t);
        assert!(d.to_datetime() < t.plus_millis(1));
    }

    #[test]
    fn pre_epoch_dates() {
        let d = Date::ymd(1965, 12, 31);
        assert_eq!(d.to_datetime().date(), d);
        assert_eq!(d.to_datetime().to_string(), "1965-12-31T00:00:00.000+0000");
    }

    #[test]
    fn months_between_partial_months() {
        let a = Date::ymd(2011, 1, 31).to_datetime();
        let b = Date::ymd(2011, 3, 1).to_datetime();
        assert_eq!(months_between(a, b), 3);
        assert_eq!(months_between(a, a), 1);
        assert_eq!(months_between(b, a), 0);
    }
}
