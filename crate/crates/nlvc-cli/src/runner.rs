//! Sweep execution with an optional worker pool. Cells of a sweep are
//! independent solves, so they parallelize freely; results are reassembled in
//! sweep order, which keeps every output byte-identical no matter the thread
//! count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use nlvc_core::error::Result;
use nlvc_core::harness::{self, ExperimentCase, ResultSet};
use nlvc_core::metrics::{self, ConvergenceRecord};

pub fn run_cases(cases: &[ExperimentCase], threads: usize) -> Result<Vec<ResultSet>> {
    if threads <= 1 {
        return cases.iter().map(harness::run_case).collect();
    }

    // flatten (case, eps) cells and let workers pull from a shared counter
    let cells: Vec<(usize, f64)> = cases
        .iter()
        .enumerate()
        .flat_map(|(ci, case)| case.epsilons.iter().map(move |&e| (ci, e)))
        .collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<ConvergenceRecord>)>();

    std::thread::scope(|scope| {
        for _ in 0..threads.min(cells.len()) {
            let tx = tx.clone();
            let next = &next;
            let cells = &cells;
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= cells.len() {
                    break;
                }
                let (ci, eps) = cells[idx];
                let rec = harness::run_cell(&cases[ci], eps);
                if tx.send((idx, rec)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
    });

    let mut slots: Vec<Option<Result<ConvergenceRecord>>> = Vec::new();
    slots.resize_with(cells.len(), || None);
    for (idx, rec) in rx.iter() {
        slots[idx] = Some(rec);
    }

    let mut out = Vec::with_capacity(cases.len());
    let mut cursor = 0;
    for case in cases {
        let mut records = Vec::with_capacity(case.epsilons.len());
        for _ in &case.epsilons {
            records.push(slots[cursor].take().expect("worker filled every slot")?);
            cursor += 1;
        }
        out.push(ResultSet {
            case_name: case.name,
            strategy: case.strategy,
            grid: case.grid,
            records: metrics::rates(records)?,
        });
    }
    Ok(out)
}
