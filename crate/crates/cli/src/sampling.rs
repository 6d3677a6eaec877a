//! Stationary sampling split into fixed-size tasks, so results depend on the
//! seed alone and not on the thread count.

use lrb::semigroup::Semigroup;
use lrb::spectral::WeightVector;
use lrb::support::SupportStructure;
use lrb::walks::{sample_stationary, StationarySample};
use lrb::LrbError;

pub const TASK_SIZE: u64 = 10_000;

/// Seed of task `t`, a splitmix64 step from `(seed, t)`.
pub fn task_seed(seed: u64, t: u64) -> u64 {
    let mut z = seed ^ (t.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn merge(parts: Vec<StationarySample>) -> Option<StationarySample> {
    let mut it = parts.into_iter();
    let mut acc = it.next()?;
    for p in it {
        for (a, b) in acc.counts.iter_mut().zip(&p.counts) {
            *a += b;
        }
        if acc.stopping.len() < p.stopping.len() {
            acc.stopping.resize(p.stopping.len(), 0);
        }
        for (a, b) in acc.stopping.iter_mut().zip(&p.stopping) {
            *a += b;
        }
        acc.samples += p.samples;
    }
    Some(acc)
}

pub fn sample_parallel(
    s: &Semigroup,
    l: &SupportStructure,
    w: &WeightVector,
    seed: u64,
    samples: u64,
    draw_cap: usize,
    threads: usize,
) -> Result<StationarySample, LrbError> {
    let tasks: Vec<(u64, u64)> = (0..samples.div_ceil(TASK_SIZE))
        .map(|t| (t, TASK_SIZE.min(samples - t * TASK_SIZE)))
        .collect();
    if tasks.is_empty() {
        return sample_stationary(s, l, w, seed, 0, draw_cap);
    }
    let threads = threads.clamp(1, tasks.len());
    let run = |&(t, n): &(u64, u64)| sample_stationary(s, l, w, task_seed(seed, t), n, draw_cap);
    let results: Vec<Result<StationarySample, LrbError>> = if threads == 1 {
        tasks.iter().map(run).collect()
    } else {
        let mut slots: Vec<Option<Result<StationarySample, LrbError>>> = vec![None; tasks.len()];
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|k| {
                    let tasks = &tasks;
                    let run = &run;
                    scope.spawn(move || {
                        tasks
                            .iter()
                            .enumerate()
                            .skip(k)
                            .step_by(threads)
                            .map(|(i, t)| (i, run(t)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, r) in h.join().expect("sampling thread panicked") {
                    slots[i] = Some(r);
                }
            }
        });
        slots
            .into_iter()
            .map(|r| r.expect("every task ran"))
            .collect()
    };
    let parts = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(merge(parts).expect("at least one task"))
}
