//! Suite assembly: one task per (instance, lemma group), run on a rayon
//! pool, with records sorted into canonical order afterwards so the output
//! stream is independent of worker count and scheduling.

use crate::checks::{covers, families, pyramids, Wanted};
use crate::report::{sort_records, CheckRecord};
use mcov_core::catalog;
use mcov_core::matroid::{Matroid, Minor};
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub wanted: Wanted,
    pub budget: u64,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub with_times: bool,
}

type Task = Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync>;

fn instance_tasks(cfg: &SuiteConfig, id: String, matroid: Arc<Matroid>) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    let push = |tasks: &mut Vec<Task>,
                f: Box<dyn Fn(&str, &Minor, &Wanted) -> Vec<CheckRecord> + Send + Sync>| {
        let id = id.clone();
        let m = matroid.clone();
        let wanted = cfg.wanted.clone();
        tasks.push(Box::new(move || f(&id, &Minor::of(m.clone()), &wanted)));
    };
    let seed = cfg.seed;
    let budget = cfg.budget;
    let times = cfg.with_times;
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| covers::cover_grid_task(id, ctx, want, seed, budget, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| covers::weighted_minor_task(id, ctx, want, seed, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| covers::trivial_min_cover_task(id, ctx, want, seed, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| covers::cover_scattered_task(id, ctx, want, seed, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| covers::scattered_density_task(id, ctx, want, seed, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| families::thickness_minor_task(id, ctx, want, seed, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| families::thick_uniform_task(id, ctx, want, budget, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| families::firm_union_thick_task(id, ctx, want, seed, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| families::density_firm_task(id, ctx, want, seed, times)),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| {
            families::density_firm_minor_task(id, ctx, want, seed, times)
        }),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| {
            families::contract_survivors_task(id, ctx, want, seed, times)
        }),
    );
    push(
        &mut tasks,
        Box::new(move |id, ctx, want| {
            families::skew_or_concentrate_task(id, ctx, want, seed, times)
        }),
    );
    tasks
}

/// Run the configured suite and return sorted records.
pub fn run_suite(cfg: &SuiteConfig) -> mcov_core::Result<Vec<CheckRecord>> {
    let entries = catalog::generate(&cfg.suite, cfg.seed)?;
    let mut tasks: Vec<Task> = Vec::new();
    for entry in &entries {
        tasks.extend(instance_tasks(cfg, entry.id.clone(), entry.matroid.clone()));
    }
    // Pyramid instances are constructed, not drawn from the catalog; they
    // ride along with the full suite and the geometry suite.
    if cfg.suite == "all" || cfg.suite == "small-pg" {
        let (wanted, times, budget) = (cfg.wanted.clone(), cfg.with_times, cfg.budget);
        {
            let wanted = wanted.clone();
            tasks.push(Box::new(move || pyramids::pyramid_basics_task(&wanted, times)));
        }
        {
            let wanted = wanted.clone();
            tasks.push(Box::new(move || pyramids::pyramid_project_task(&wanted, times)));
        }
        {
            let wanted = wanted.clone();
            tasks.push(Box::new(move || pyramids::pyramid_augment_task(&wanted, times)));
        }
        tasks.push(Box::new(move || pyramids::pyramid_climb_task(&wanted, budget, times)));
    }
    let run = || tasks.par_iter().map(|t| t()).collect::<Vec<Vec<CheckRecord>>>();
    let nested = if cfg.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| mcov_core::Error::Input(format!("worker pool: {e}")))?;
        pool.install(run)
    } else {
        run()
    };
    let mut records: Vec<CheckRecord> = nested.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok(records)
}
