//! Timed execution of a schedule.

use std::sync::mpsc;
use std::sync::{Condvar, Mutex};
use std::thread;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snbkit_core::query::result_columns;
use snbkit_core::{Id, QueryFamily, QueryResultTable, ReadQuery, Value};

use crate::connector::Connector;
use crate::log::{LogRecord, ResultsLog};
use crate::schedule::{Operation, ScheduleEntry};
use crate::workload::WorkloadDefinition;

const PERSON_COLUMNS: &[&str] = &["personId", "originalPostAuthorId", "replyAuthorId", "moderatorId", "personIdsInPath"];
const MESSAGE_COLUMNS: &[&str] = &["messageId", "commentId", "originalPostId"];

/// Ids seen in results, in first-seen order.
#[derive(Default)]
struct Harvest {
    persons: Vec<Id>,
    messages: Vec<Id>,
}

impl Harvest {
    fn add(&mut self, table: &QueryResultTable) {
        let columns = result_columns(table.template);
        for row in &table.rows {
            for (name, v) in columns.iter().zip(row) {
                let target = if PERSON_COLUMNS.contains(name) {
                    &mut self.persons
                } else if MESSAGE_COLUMNS.contains(name) {
                    &mut self.messages
                } else {
                    continue;
                };
                let ids: Vec<i64> = match v {
                    Value::Int(i) => vec![*i],
                    Value::List(l) => l.iter().filter_map(Value::as_int).collect(),
                    _ => Vec::new(),
                };
                for id in ids.into_iter().filter(|i| *i >= 0).map(|i| i as Id) {
                    if !target.contains(&id) {
                        target.push(id);
                    }
                }
            }
        }
    }
}

fn person_sequence(id: Id) -> Vec<ReadQuery> {
    vec![ReadQuery::Is1 { person_id: id }, ReadQuery::Is2 { person_id: id }, ReadQuery::Is3 { person_id: id }]
}

fn message_sequence(id: Id) -> Vec<ReadQuery> {
    vec![
        ReadQuery::Is4 { message_id: id },
        ReadQuery::Is5 { message_id: id },
        ReadQuery::Is6 { message_id: id },
        ReadQuery::Is7 { message_id: id },
    ]
}

struct Clock {
    start: Instant,
    epoch_ms: i64,
}

impl Clock {
    fn now_ms(&self) -> i64 {
        self.epoch_ms + self.start.elapsed().as_millis() as i64
    }

    fn sleep_until(&self, offset_ms: i64) {
        let due = self.start + Duration::from_millis(offset_ms.max(0) as u64);
        let now = Instant::now();
        if due > now {
            thread::sleep(due - now);
        }
    }
}

struct Shared<'a> {
    conn: &'a dyn Connector,
    schedule: &'a [ScheduleEntry],
    wd: &'a WorkloadDefinition,
    clock: Clock,
    log: Mutex<Vec<LogRecord>>,
    /// Earlier reads per entry, for updates to wait on.
    reads_before: Vec<usize>,
    progress: Mutex<Progress>,
    signal: Condvar,
}

#[derive(Default)]
struct Progress {
    updates: usize,
    reads: usize,
}

impl Shared<'_> {
    fn record(&self, r: LogRecord) {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).push(r);
    }

    fn timed<T>(&self, f: impl FnOnce() -> T) -> (i64, u64, T) {
        let actual = self.clock.now_ms();
        let t = Instant::now();
        let out = f();
        (actual, t.elapsed().as_micros() as u64, out)
    }

    fn status<E: std::fmt::Display>(r: &Result<usize, E>) -> (usize, String) {
        match r {
            Ok(n) => (*n, "OK".to_string()),
            Err(e) => (0, format!("ERROR {e}")),
        }
    }

    fn wait(&self, ready: impl Fn(&Progress) -> bool) {
        let mut p = self.progress.lock().unwrap_or_else(|e| e.into_inner());
        while !ready(&p) {
            p = self.signal.wait(p).unwrap_or_else(|e| e.into_inner());
        }
    }

    fn advance(&self, f: impl FnOnce(&mut Progress)) {
        f(&mut self.progress.lock().unwrap_or_else(|e| e.into_inner()));
        self.signal.notify_all();
    }

    fn run_update(&self, idx: usize) {
        let entry = &self.schedule[idx];
        self.wait(|p| p.reads >= self.reads_before[idx]);
        let Operation::Update(e) = &entry.operation else { unreachable!("update lane got a read") };
        let (actual, duration, res) = self.timed(|| self.conn.update(e).map(|_| 1));
        let (result_count, status) = Self::status(&res);
        self.record(LogRecord {
            operation: entry.operation.label(),
            scheduled_start_ms: self.clock.epoch_ms + entry.scheduled_ms,
            actual_start_ms: actual,
            duration_us: duration,
            result_count,
            status,
            entry: idx,
            step: 0,
            params: format!("{}", e.time.millis()),
        });
        self.advance(|p| p.updates += 1);
    }

    fn execute(&self, q: &ReadQuery, scheduled: i64, entry: usize, step: usize) -> Option<QueryResultTable> {
        let (actual, duration, res) = self.timed(|| self.conn.read(q));
        let (result_count, status) = Self::status(&res.as_ref().map(QueryResultTable::len));
        self.record(LogRecord {
            operation: q.template().to_string(),
            scheduled_start_ms: scheduled,
            actual_start_ms: actual,
            duration_us: duration,
            result_count,
            status,
            entry,
            step,
            params: q.param_texts().join("|"),
        });
        res.ok()
    }

    fn run_read(&self, idx: usize) {
        let entry = &self.schedule[idx];
        let Operation::Read(q) = &entry.operation else { unreachable!("read worker got an update") };
        self.wait(|p| p.updates >= entry.updates_before);
        self.read_chain(idx, q);
        self.advance(|p| p.reads += 1);
    }

    fn read_chain(&self, idx: usize, q: &ReadQuery) {
        let entry = &self.schedule[idx];
        let Some(table) = self.execute(q, self.clock.epoch_ms + entry.scheduled_ms, idx, 0) else { return };
        if q.template().family != QueryFamily::Ic {
            return;
        }
        let issued = self.clock.now_ms();
        let mut harvest = Harvest::default();
        harvest.add(&table);
        let message_centric = !harvest.messages.is_empty();
        let mut rng = ChaCha8Rng::seed_from_u64(self.wd.seed ^ (idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut probability = self.wd.short_read_probability;
        let mut step = 1;
        loop {
            if rng.random::<f64>() >= probability {
                break;
            }
            let want_message = if step == 1 { message_centric } else { rng.random_bool(0.5) };
            let sequence = match (want_message, harvest.messages.choose(&mut rng), harvest.persons.choose(&mut rng)) {
                (true, Some(&m), _) | (false, Some(&m), None) => message_sequence(m),
                (_, _, Some(&p)) => person_sequence(p),
                (_, None, None) => break,
            };
            for sq in &sequence {
                if let Some(t) = self.execute(sq, issued, idx, step) {
                    harvest.add(&t);
                }
                step += 1;
            }
            probability *= self.wd.short_read_decay;
        }
    }
}

/// Executes `schedule` against `conn` and returns the log in completion order.
///
/// Entries are dispatched no earlier than their scheduled offset. Updates go
/// through one ordered lane; reads run on `threads` workers. A read waits for
/// every earlier update and an update waits for every earlier read, so each
/// read sees exactly the updates scheduled before it. Each complex read is followed by
/// short-read sequences whose ids come from the results seen so far in that
/// chain.
pub fn run(schedule: &[ScheduleEntry], conn: &dyn Connector, wd: &WorkloadDefinition, threads: usize) -> ResultsLog {
    let epoch_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as i64).unwrap_or(0);
    let shared = Shared {
        conn,
        schedule,
        wd,
        clock: Clock { start: Instant::now(), epoch_ms },
        log: Mutex::new(Vec::new()),
        reads_before: schedule
            .iter()
            .scan(0, |reads, e| {
                let before = *reads;
                *reads += usize::from(!e.operation.is_update());
                Some(before)
            })
            .collect(),
        progress: Mutex::new(Progress::default()),
        signal: Condvar::new(),
    };
    let threads = threads.max(1);
    let (update_tx, update_rx) = mpsc::channel::<usize>();
    let (read_tx, read_rx) = mpsc::sync_channel::<usize>(threads * 4);
    let read_rx = Mutex::new(read_rx);
    let (shared_ref, read_rx) = (&shared, &read_rx);
    thread::scope(move |s| {
        let shared = shared_ref;
        s.spawn(move || {
            for idx in update_rx {
                shared.run_update(idx);
            }
        });
        for _ in 0..threads {
            s.spawn(move || loop {
                let next = read_rx.lock().unwrap_or_else(|e| e.into_inner()).recv();
                match next {
                    Ok(idx) => shared.run_read(idx),
                    Err(_) => break,
                }
            });
        }
        for (idx, entry) in schedule.iter().enumerate() {
            shared.clock.sleep_until(entry.scheduled_ms);
            let sent = if entry.operation.is_update() { update_tx.send(idx).is_ok() } else { read_tx.send(idx).is_ok() };
            if !sent {
                break;
            }
        }
    });
    ResultsLog { records: shared.log.into_inner().unwrap_or_else(|e| e.into_inner()) }
}
