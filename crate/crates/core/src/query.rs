//! Read query templates, their typed bindings and result tables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::Id;
use crate::time::{Date, DateTime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QueryFamily {
    /// Interactive complex reads.
    Ic,
    /// Interactive short reads.
    Is,
    /// Business intelligence reads.
    Bi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueryTemplateId {
    pub family: QueryFamily,
    pub number: u8,
}

impl QueryTemplateId {
    pub fn new(family: QueryFamily, number: u8) -> Option<QueryTemplateId> {
        let max = match family {
            QueryFamily::Ic => 14,
            QueryFamily::Is => 7,
            QueryFamily::Bi => 25,
        };
        (1..=max).contains(&number).then_some(QueryTemplateId { family, number })
    }

    pub const fn ic(number: u8) -> QueryTemplateId {
        QueryTemplateId { family: QueryFamily::Ic, number }
    }

    pub const fn is(number: u8) -> QueryTemplateId {
        QueryTemplateId { family: QueryFamily::Is, number }
    }

    pub const fn bi(number: u8) -> QueryTemplateId {
        QueryTemplateId { family: QueryFamily::Bi, number }
    }

    /// All 46 read templates in IC, IS, BI order.
    pub fn all() -> Vec<QueryTemplateId> {
        let ic = (1..=14).map(QueryTemplateId::ic);
        let is = (1..=7).map(QueryTemplateId::is);
        let bi = (1..=25).map(QueryTemplateId::bi);
        ic.chain(is).chain(bi).collect()
    }

    /// Templates whose bindings come from curated parameter files.
    pub fn curated() -> Vec<QueryTemplateId> {
        QueryTemplateId::all().into_iter().filter(|t| t.family != QueryFamily::Is).collect()
    }

    /// Stem used in parameter file names, e.g. `interactive_3` or `bi_12`.
    pub fn file_stem(&self) -> String {
        match self.family {
            QueryFamily::Ic => format!("interactive_{}", self.number),
            QueryFamily::Is => format!("interactive_short_{}", self.number),
            QueryFamily::Bi => format!("bi_{}", self.number),
        }
    }
}

impl fmt::Display for QueryTemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.family {
            QueryFamily::Ic => "IC",
            QueryFamily::Is => "IS",
            QueryFamily::Bi => "BI",
        };
        write!(f, "{p}{}", self.number)
    }
}

impl FromStr for QueryTemplateId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<QueryTemplateId, ModelError> {
        let bad = || ModelError::Parse(format!("unknown query template {s:?}"));
        if s.len() < 3 || !s.is_char_boundary(2) {
            return Err(bad());
        }
        let family = match &s[..2] {
            "IC" | "ic" => QueryFamily::Ic,
            "IS" | "is" => QueryFamily::Is,
            "BI" | "bi" => QueryFamily::Bi,
            _ => return Err(bad()),
        };
        let n: u8 = s[2..].parse().map_err(|_| bad())?;
        QueryTemplateId::new(family, n).ok_or_else(bad)
    }
}

impl Serialize for QueryTemplateId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QueryTemplateId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A parameter value in its untyped, file-level form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Text(String),
    List(Vec<String>),
}

/// Conversion between a typed parameter field and its file encodings.
pub trait Param: Sized {
    fn to_param(&self) -> ParamValue;
    fn from_param(v: &ParamValue) -> Result<Self, ModelError>;
    /// Pipe-file encoding; lists are joined with `;`.
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Result<Self, ModelError>;
}

fn param_err(what: &str, v: impl fmt::Debug) -> ModelError {
    ModelError::Parse(format!("expected {what}, got {v:?}"))
}

impl Param for u64 {
    fn to_param(&self) -> ParamValue {
        ParamValue::Int(*self as i64)
    }
    fn from_param(v: &ParamValue) -> Result<Self, ModelError> {
        match v {
            ParamValue::Int(i) if *i >= 0 => Ok(*i as u64),
            ParamValue::Text(s) => Self::from_text(s),
            _ => Err(param_err("id", v)),
        }
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn from_text(s: &str) -> Result<Self, ModelError> {
        s.parse().map_err(|_| param_err("id", s))
    }
}

impl Param for i64 {
    fn to_param(&self) -> ParamValue {
        ParamValue::Int(*self)
    }
    fn from_param(v: &ParamValue) -> Result<Self, ModelError> {
        match v {
            ParamValue::Int(i) => Ok(*i),
            ParamValue::Text(s) => Self::from_text(s),
            _ => Err(param_err("integer", v)),
        }
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn from_text(s: &str) -> Result<Self, ModelError> {
        s.parse().map_err(|_| param_err("integer", s))
    }
}

impl Param for String {
    fn to_param(&self) -> ParamValue {
        ParamValue::Text(self.clone())
    }
    fn from_param(v: &ParamValue) -> Result<Self, ModelError> {
        match v {
            ParamValue::Text(s) => Ok(s.clone()),
            _ => Err(param_err("string", v)),
        }
    }
    fn to_text(&self) -> String {
        self.clone()
    }
    fn from_text(s: &str) -> Result<Self, ModelError> {
        Ok(s.to_string())
    }
}

impl Param for Date {
    fn to_param(&self) -> ParamValue {
        ParamValue::Text(self.to_string())
    }
    fn from_param(v: &ParamValue) -> Result<Self, ModelError> {
        match v {
            ParamValue::Text(s) => s.parse(),
            _ => Err(param_err("date", v)),
        }
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn from_text(s: &str) -> Result<Self, ModelError> {
        s.parse()
    }
}

impl Param for Vec<String> {
    fn to_param(&self) -> ParamValue {
        ParamValue::List(self.clone())
    }
    fn from_param(v: &ParamValue) -> Result<Self, ModelError> {
        match v {
            ParamValue::List(l) => Ok(l.clone()),
            ParamValue::Text(s) => Self::from_text(s),
            _ => Err(param_err("string list", v)),
        }
    }
    fn to_text(&self) -> String {
        self.join(";")
    }
    fn from_text(s: &str) -> Result<Self, ModelError> {
        if s.is_empty() {
            Ok(Vec::new())
        } else {
            Ok(s.split(';').map(str::to_string).collect())
        }
    }
}

macro_rules! read_queries {
    ($( $variant:ident = $family:ident $num:literal { $( $field:ident : $ty:ty = $name:literal ),* $(,)? } )*) => {
        /// A read query template together with its parameter binding.
        #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
        #[serde(tag = "query")]
        pub enum ReadQuery {
            $( $variant { $( $field: $ty ),* }, )*
        }

        impl ReadQuery {
            pub fn template(&self) -> QueryTemplateId {
                match self {
                    $( ReadQuery::$variant { .. } => QueryTemplateId { family: QueryFamily::$family, number: $num }, )*
                }
            }

            /// Parameter names in file column order.
            pub fn param_names(t: QueryTemplateId) -> &'static [&'static str] {
                match (t.family, t.number) {
                    $( (QueryFamily::$family, $num) => &[$($name),*], )*
                    _ => &[],
                }
            }

            pub fn params(&self) -> Vec<ParamValue> {
                match self {
                    $( ReadQuery::$variant { $( $field ),* } => vec![$( Param::to_param($field) ),*], )*
                }
            }

            pub fn param_texts(&self) -> Vec<String> {
                match self {
                    $( ReadQuery::$variant { $( $field ),* } => vec![$( Param::to_text($field) ),*], )*
                }
            }

            pub fn from_params(t: QueryTemplateId, values: &[ParamValue]) -> Result<ReadQuery, ModelError> {
                let names = ReadQuery::param_names(t);
                if names.len() != values.len() || names.is_empty() {
                    return Err(ModelError::Parse(format!("{t} takes {} parameters, got {}", names.len(), values.len())));
                }
                #[allow(unused_variables, unused_mut)]
                let mut it = values.iter();
                match (t.family, t.number) {
                    $( (QueryFamily::$family, $num) => Ok(ReadQuery::$variant {
                        $( $field: <$ty as Param>::from_param(it.next().expect("length checked"))? ),*
                    }), )*
                    _ => Err(ModelError::Parse(format!("unknown template {t}"))),
                }
            }

            pub fn from_texts(t: QueryTemplateId, values: &[&str]) -> Result<ReadQuery, ModelError> {
                let names = ReadQuery::param_names(t);
                if names.len() != values.len() || names.is_empty() {
                    return Err(ModelError::Parse(format!("{t} takes {} parameters, got {}", names.len(), values.len())));
                }
                #[allow(unused_variables, unused_mut)]
                let mut it = values.iter();
                match (t.family, t.number) {
                    $( (QueryFamily::$family, $num) => Ok(ReadQuery::$variant {
                        $( $field: <$ty as Param>::from_text(it.next().expect("length checked"))? ),*
                    }), )*
                    _ => Err(ModelError::Parse(format!("unknown template {t}"))),
                }
            }
        }
    };
}

read_queries! {
    Ic1 = Ic 1 { person_id: Id = "personId", first_name: String = "firstName" }
    Ic2 = Ic 2 { person_id: Id = "personId", max_date: Date = "maxDate" }
    Ic3 = Ic 3 {
        person_id: Id = "personId",
        country_x: String = "countryXName",
        country_y: String = "countryYName",
        start_date: Date = "startDate",
        duration_days: i64 = "durationDays",
    }
    Ic4 = Ic 4 { person_id: Id = "personId", start_date: Date = "startDate", duration_days: i64 = "durationDays" }
    Ic5 = Ic 5 { person_id: Id = "personId", min_date: Date = "minDate" }
    Ic6 = Ic 6 { person_id: Id = "personId", tag_name: String = "tagName" }
    Ic7 = Ic 7 { person_id: Id = "personId" }
    Ic8 = Ic 8 { person_id: Id = "personId" }
    Ic9 = Ic 9 { person_id: Id = "personId", max_date: Date = "maxDate" }
    Ic10 = Ic 10 { person_id: Id = "personId", month: i64 = "month" }
    Ic11 = Ic 11 { person_id: Id = "personId", country_name: String = "countryName", work_from_year: i64 = "workFromYear" }
    Ic12 = Ic 12 { person_id: Id = "personId", tag_class_name: String = "tagClassName" }
    Ic13 = Ic 13 { person1_id: Id = "person1Id", person2_id: Id = "person2Id" }
    Ic14 = Ic 14 { person1_id: Id = "person1Id", person2_id: Id = "person2Id" }
    Is1 = Is 1 { person_id: Id = "personId" }
    Is2 = Is 2 { person_id: Id = "personId" }
    Is3 = Is 3 { person_id: Id = "personId" }
    Is4 = Is 4 { message_id: Id = "messageId" }
    Is5 = Is 5 { message_id: Id = "messageId" }
    Is6 = Is 6 { message_id: Id = "messageId" }
    Is7 = Is 7 { message_id: Id = "messageId" }
    Bi1 = Bi 1 { date: Date = "date" }
    Bi2 = Bi 2 { start_date: Date = "startDate", end_date: Date = "endDate", country1: String = "country1", country2: String = "country2" }
    Bi3 = Bi 3 { year: i64 = "year", month: i64 = "month" }
    Bi4 = Bi 4 { tag_class: String = "tagClass", country: String = "country" }
    Bi5 = Bi 5 { country: String = "country" }
    Bi6 = Bi 6 { tag: String = "tag" }
    Bi7 = Bi 7 { tag: String = "tag" }
    Bi8 = Bi 8 { tag: String = "tag" }
    Bi9 = Bi 9 { tag_class1: String = "tagClass1", tag_class2: String = "tagClass2", threshold: i64 = "threshold" }
    Bi10 = Bi 10 { tag: String = "tag", date: Date = "date" }
    Bi11 = Bi 11 { country: String = "country", blacklist: Vec<String> = "blacklist" }
    Bi12 = Bi 12 { date: Date = "date", like_threshold: i64 = "likeThreshold" }
    Bi13 = Bi 13 { country: String = "country" }
    Bi14 = Bi 14 { start_date: Date = "startDate", end_date: Date = "endDate" }
    Bi15 = Bi 15 { country: String = "country" }
    Bi16 = Bi 16 {
        person_id: Id = "personId",
        country: String = "country",
        tag_class: String = "tagClass",
        min_path_distance: i64 = "minPathDistance",
        max_path_distance: i64 = "maxPathDistance",
    }
    Bi17 = Bi 17 { country: String = "country" }
    Bi18 = Bi 18 { date: Date = "date", length_threshold: i64 = "lengthThreshold", languages: Vec<String> = "languages" }
    Bi19 = Bi 19 { date: Date = "date", tag_class1: String = "tagClass1", tag_class2: String = "tagClass2" }
    Bi20 = Bi 20 { tag_classes: Vec<String> = "tagClasses" }
    Bi21 = Bi 21 { country: String = "country", end_date: Date = "endDate" }
    Bi22 = Bi 22 { country1: String = "country1", country2: String = "country2" }
    Bi23 = Bi 23 { country: String = "country" }
    Bi24 = Bi 24 { tag_class: String = "tagClass" }
    Bi25 = Bi 25 { person1_id: Id = "person1Id", person2_id: Id = "person2Id", start_date: Date = "startDate", end_date: Date = "endDate" }
}

/// A single cell of a result table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Date(Date),
    DateTime(DateTime),
    /// Sets (sorted), lists and tuples.
    List(Vec<Value>),
}

impl Value {
    pub fn id(id: Id) -> Value {
        Value::Int(id as i64)
    }

    pub fn str(s: impl Into<String>) -> Value {
        Value::Str(s.into())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(f) => Some(*f),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x}"),
            Value::Str(s) => write!(f, "{s}"),
            Value::Date(d) => write!(f, "{d}"),
            Value::DateTime(t) => write!(f, "{t}"),
            Value::List(l) => {
                f.write_str("[")?;
                for (i, v) in l.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

pub type Row = Vec<Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryResultTable {
    pub template: QueryTemplateId,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl QueryResultTable {
    pub fn new(template: QueryTemplateId, rows: Vec<Row>) -> QueryResultTable {
        QueryResultTable {
            template,
            columns: result_columns(template).iter().map(|c| c.to_string()).collect(),
            rows,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Result row limit of a template, if any.
pub fn result_limit(t: QueryTemplateId) -> Option<usize> {
    match (t.family, t.number) {
        (QueryFamily::Ic, 4 | 6 | 10 | 11) => Some(10),
        (QueryFamily::Ic, 13 | 14) => None,
        (QueryFamily::Ic, _) => Some(20),
        (QueryFamily::Is, 2) => Some(10),
        (QueryFamily::Is, _) => None,
        (QueryFamily::Bi, 4) => Some(20),
        (QueryFamily::Bi, 1 | 17 | 18 | 22 | 25) => None,
        (QueryFamily::Bi, _) => Some(100),
    }
}

/// Result column names of a template.
pub fn result_columns(t: QueryTemplateId) -> &'static [&'static str] {
    match (t.family, t.number) {
        (QueryFamily::Ic, 1) => &[
            "personId",
            "personLastName",
            "distanceFromPerson",
            "personBirthday",
            "personCreationDate",
            "personGender",
            "personBrowserUsed",
            "personLocationIp",
            "personEmails",
            "personLanguages",
            "personCityName",
            "personUniversities",
            "personCompanies",
        ],
        (QueryFamily::Ic, 2 | 9) => &[
            "personId",
            "personFirstName",
            "personLastName",
            "messageId",
            "messageContent",
            "messageCreationDate",
        ],
        (QueryFamily::Ic, 3) => &["personId", "personFirstName", "personLastName", "xCount", "yCount", "count"],
        (QueryFamily::Ic, 4 | 6) => &["tagName", "postCount"],
        (QueryFamily::Ic, 5) => &["forumTitle", "postCount"],
        (QueryFamily::Ic, 7) => &[
            "personId",
            "personFirstName",
            "personLastName",
            "likeCreationDate",
            "messageId",
            "messageContent",
            "minutesLatency",
            "isNew",
        ],
        (QueryFamily::Ic, 8) => &[
            "personId",
            "personFirstName",
            "personLastName",
            "commentCreationDate",
            "commentId",
            "commentContent",
        ],
        (QueryFamily::Ic, 10) => &[
            "personId",
            "personFirstName",
            "personLastName",
            "commonInterestScore",
            "personGender",
            "personCityName",
        ],
        (QueryFamily::Ic, 11) => &["personId", "personFirstName", "personLastName", "organizationName", "organizationWorkFromYear"],
        (QueryFamily::Ic, 12) => &["personId", "personFirstName", "personLastName", "tagNames", "replyCount"],
        (QueryFamily::Ic, 13) => &["shortestPathLength"],
        (QueryFamily::Ic, 14) | (QueryFamily::Bi, 25) => &["personIdsInPath", "pathWeight"],
        (QueryFamily::Is, 1) => &[
            "firstName",
            "lastName",
            "birthday",
            "locationIP",
            "browserUsed",
            "cityId",
            "gender",
            "creationDate",
        ],
        (QueryFamily::Is, 2) => &[
            "messageId",
            "messageContent",
            "messageCreationDate",
            "originalPostId",
            "originalPostAuthorId",
            "originalPostAuthorFirstName",
            "originalPostAuthorLastName",
        ],
        (QueryFamily::Is, 3) => &["personId", "firstName", "lastName", "friendshipCreationDate"],
        (QueryFamily::Is, 4) => &["messageCreationDate", "messageContent"],
        (QueryFamily::Is, 5) => &["personId", "firstName", "lastName"],
        (QueryFamily::Is, 6) => &["forumId", "forumTitle", "moderatorId", "moderatorFirstName", "moderatorLastName"],
        (QueryFamily::Is, 7) => &[
            "commentId",
            "commentContent",
            "commentCreationDate",
            "replyAuthorId",
            "replyAuthorFirstName",
            "replyAuthorLastName",
            "replyAuthorKnowsOriginalMessageAuthor",
        ],
        (QueryFamily::Bi, 1) => &[
            "year",
            "isComment",
            "lengthCategory",
            "messageCount",
            "averageMessageLength",
            "sumMessageLength",
            "percentageOfMessages",
        ],
        (QueryFamily::Bi, 2) => &["countryName", "messageMonth", "personGender", "ageGroup", "tagName", "messageCount"],
        (QueryFamily::Bi, 3) => &["tagName", "countMonth1", "countMonth2", "diff"],
        (QueryFamily::Bi, 4) => &["forumId", "forumTitle", "forumCreationDate", "personId", "postCount"],
        (QueryFamily::Bi, 5) => &["personId", "personFirstName", "personLastName", "personCreationDate", "postCount"],
        (QueryFamily::Bi, 6) => &["personId", "replyCount", "likeCount", "messageCount", "score"],
        (QueryFamily::Bi, 7) => &["personId", "authorityScore"],
        (QueryFamily::Bi, 8) => &["relatedTagName", "count"],
        (QueryFamily::Bi, 9) => &["forumId", "count1", "count2"],
        (QueryFamily::Bi, 10) => &["personId", "score", "friendsScore"],
        (QueryFamily::Bi, 11) => &["personId", "tagName", "likeCount", "replyCount"],
        (QueryFamily::Bi, 12) => &["messageId", "messageCreationDate", "creatorFirstName", "creatorLastName", "likeCount"],
        (QueryFamily::Bi, 13) => &["year", "month", "popularTags"],
        (QueryFamily::Bi, 14) => &["personId", "personFirstName", "personLastName", "threadCount", "messageCount"],
        (QueryFamily::Bi, 15) => &["personId", "count"],
        (QueryFamily::Bi, 16) => &["personId", "tagName", "messageCount"],
        (QueryFamily::Bi, 17) => &["count"],
        (QueryFamily::Bi, 18) => &["messageCount", "personCount"],
        (QueryFamily::Bi, 19) => &["personId", "strangerCount", "interactionCount"],
        (QueryFamily::Bi, 20) => &["tagClassName", "messageCount"],
        (QueryFamily::Bi, 21) => &["zombieId", "zombieLikeCount", "totalLikeCount", "zombieScore"],
        (QueryFamily::Bi, 22) => &["person1Id", "person2Id", "city1Name", "score"],
        (QueryFamily::Bi, 23) => &["messageCount", "destinationName", "month"],
        (QueryFamily::Bi, 24) => &["messageCount", "likeCount", "year", "month", "continentName"],
        _ => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_template_has_params_and_columns() {
        let all = QueryTemplateId::all();
        assert_eq!(all.len(), 46);
        for t in all {
            assert!(!ReadQuery::param_names(t).is_empty(), "{t}");
            assert!(!result_columns(t).is_empty(), "{t}");
            assert_eq!(t.to_string().parse::<QueryTemplateId>().unwrap(), t);
        }
    }

    #[test]
    fn text_round_trip() {
        let q = ReadQuery::Bi18 {
            date: Date::ymd(2011, 7, 1),
            length_threshold: 20,
            languages: vec!["ar".into(), "hu".into()],
        };
        let texts = q.param_texts();
        assert_eq!(texts, vec!["2011-07-01", "20", "ar;hu"]);
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        assert_eq!(ReadQuery::from_texts(q.template(), &refs).unwrap(), q);
        assert_eq!(ReadQuery::from_params(q.template(), &q.params()).unwrap(), q);
    }

    #[test]
    fn json_round_trip() {
        let q = ReadQuery::Ic1 { person_id: 4, first_name: "Lei".into() };
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(serde_json::from_str::<ReadQuery>(&s).unwrap(), q);
    }

    #[test]
    fn wrong_arity_rejected() {
        assert!(ReadQuery::from_texts(QueryTemplateId::ic(1), &["1"]).is_err());
        assert!("IC15".parse::<QueryTemplateId>().is_err());
    }
}
