//! Reference executor for the read, insert and delete operations.
//!
//! Every read is a hand-written plan over the snapshot's indexes and returns
//! a fully sorted, limited [`QueryResultTable`].

pub mod algorithms;
pub mod bi;
mod common;
mod error;
pub mod ic;
pub mod is;
pub mod update;

use snbkit_core::query::result_limit;
use snbkit_core::{GraphSnapshot, QueryResultTable, ReadQuery};

pub use algorithms::{
    all_shortest_paths, bfs_distances, count_triangles, months_between, shortest_path_length, trail_reachable,
    weighted_shortest_paths, Adjacency,
};
pub use error::EngineError;
pub use update::{apply_delete, apply_insert, DeletionReport};

/// Runs a read query.
pub fn execute(g: &GraphSnapshot, q: &ReadQuery) -> Result<QueryResultTable, EngineError> {
    use ReadQuery::*;
    let mut rows = match q {
        Ic1 { person_id, first_name } => ic::ic1(g, *person_id, first_name),
        Ic2 { person_id, max_date } => ic::ic2(g, *person_id, *max_date),
        Ic3 { person_id, country_x, country_y, start_date, duration_days } => {
            ic::ic3(g, *person_id, country_x, country_y, *start_date, *duration_days)
        }
        Ic4 { person_id, start_date, duration_days } => ic::ic4(g, *person_id, *start_date, *duration_days),
        Ic5 { person_id, min_date } => ic::ic5(g, *person_id, *min_date),
        Ic6 { person_id, tag_name } => ic::ic6(g, *person_id, tag_name),
        Ic7 { person_id } => ic::ic7(g, *person_id),
        Ic8 { person_id } => ic::ic8(g, *person_id),
        Ic9 { person_id, max_date } => ic::ic9(g, *person_id, *max_date),
        Ic10 { person_id, month } => ic::ic10(g, *person_id, *month),
        Ic11 { person_id, country_name, work_from_year } => ic::ic11(g, *person_id, country_name, *work_from_year),
        Ic12 { person_id, tag_class_name } => ic::ic12(g, *person_id, tag_class_name),
        Ic13 { person1_id, person2_id } => ic::ic13(g, *person1_id, *person2_id),
        Ic14 { person1_id, person2_id } => ic::ic14(g, *person1_id, *person2_id),
        Is1 { person_id } => is::is1(g, *person_id),
        Is2 { person_id } => is::is2(g, *person_id),
        Is3 { person_id } => is::is3(g, *person_id),
        Is4 { message_id } => is::is4(g, *message_id),
        Is5 { message_id } => is::is5(g, *message_id),
        Is6 { message_id } => is::is6(g, *message_id),
        Is7 { message_id } => is::is7(g, *message_id),
        Bi1 { date } => bi::bi1(g, *date),
        Bi2 { start_date, end_date, country1, country2 } => bi::bi2(g, *start_date, *end_date, country1, country2),
        Bi3 { year, month } => bi::bi3(g, *year, *month),
        Bi4 { tag_class, country } => bi::bi4(g, tag_class, country),
        Bi5 { country } => bi::bi5(g, country),
        Bi6 { tag } => bi::bi6(g, tag),
        Bi7 { tag } => bi::bi7(g, tag),
        Bi8 { tag } => bi::bi8(g, tag),
        Bi9 { tag_class1, tag_class2, threshold } => bi::bi9(g, tag_class1, tag_class2, *threshold),
        Bi10 { tag, date } => bi::bi10(g, tag, *date),
        Bi11 { country, blacklist } => bi::bi11(g, country, blacklist),
        Bi12 { date, like_threshold } => bi::bi12(g, *date, *like_threshold),
        Bi13 { country } => bi::bi13(g, country),
        Bi14 { start_date, end_date } => bi::bi14(g, *start_date, *end_date),
        Bi15 { country } => bi::bi15(g, country),
        Bi16 { person_id, country, tag_class, min_path_distance, max_path_distance } => {
            bi::bi16(g, *person_id, country, tag_class, *min_path_distance, *max_path_distance)
        }
        Bi17 { country } => bi::bi17(g, country),
        Bi18 { date, length_threshold, languages } => bi::bi18(g, *date, *length_threshold, languages),
        Bi19 { date, tag_class1, tag_class2 } => bi::bi19(g, *date, tag_class1, tag_class2),
        Bi20 { tag_classes } => bi::bi20(g, tag_classes),
        Bi21 { country, end_date } => bi::bi21(g, country, *end_date),
        Bi22 { country1, country2 } => bi::bi22(g, country1, country2),
        Bi23 { country } => bi::bi23(g, country),
        Bi24 { tag_class } => bi::bi24(g, tag_class),
        Bi25 { person1_id, person2_id, start_date, end_date } => {
            bi::bi25(g, *person1_id, *person2_id, *start_date, *end_date)
        }
    }?;
    let template = q.template();
    if let Some(limit) = result_limit(template) {
        rows.truncate(limit);
    }
    Ok(QueryResultTable::new(template, rows))
}
