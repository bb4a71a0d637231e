//! Rayon front end for the chunked counter. Chunk results are summed in
//! chunk order, so thread count never changes an answer.

use c2lab_core::counting::{
    reduction_job, residue_from_point_count, signed_residue, CountError, CountJob, CountPlan,
};
use c2lab_core::ffield::FieldTable;
use c2lab_core::graph::Graph;
use c2lab_core::sympoly::{graph_polynomial, ReductionState};
use rayon::prelude::*;

/// Chunks per worker; more than one smooths out uneven subtrees.
const CHUNKS_PER_THREAD: usize = 8;

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

pub fn count_plan(plan: &CountPlan, field: &FieldTable) -> u128 {
    let chunks = plan.chunks(rayon::current_num_threads() * CHUNKS_PER_THREAD);
    let parts: Vec<u128> = chunks.par_iter().map(|c| plan.count_chunk(c, field)).collect();
    plan.base + parts.into_iter().sum::<u128>()
}

pub fn count_job(job: &CountJob, field: &FieldTable) -> Result<u128, CountError> {
    Ok(count_plan(&job.plan(field)?, field))
}

pub fn graph_point_count(g: &Graph, field: &FieldTable, budget: u64) -> Result<u128, CountError> {
    if g.vertex_count() < 3 {
        return Err(CountError::TooFewVertices(g.vertex_count()));
    }
    let psi = graph_polynomial(g)?;
    let nvars = g.edge_count().max(psi.nvars());
    let psi = psi.with_nvars(nvars);
    count_job(&CountJob::new(psi, (0..g.edge_count()).collect()).with_budget(budget), field)
}

pub fn c2_direct(g: &Graph, field: &FieldTable, budget: u64) -> Result<u32, CountError> {
    residue_from_point_count(graph_point_count(g, field, budget)?, field.q())
}

pub fn c2_from_reduction(state: &ReductionState, field: &FieldTable, budget: u64) -> Result<u32, CountError> {
    if state.current.is_zero() {
        return Ok(0);
    }
    let count = count_job(&reduction_job(state, budget), field)?;
    Ok(signed_residue(count, state.step, field.q()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use c2lab_core::counting;
    use c2lab_core::ffield::field_of_size;
    use c2lab_core::sympoly::denominator_reduce;

    #[test]
    fn matches_serial_counter() {
        let g = Graph::k5();
        let d = c2lab_core::graph::decomplete(&g, 0).unwrap();
        let st = denominator_reduce(&d, None).unwrap();
        for q in [2u64, 3, 4, 5, 7] {
            let f = field_of_size(q).unwrap();
            let budget = counting::DEFAULT_BUDGET;
            assert_eq!(
                graph_point_count(&d, &f, budget).unwrap(),
                counting::graph_point_count(&d, &f, budget).unwrap()
            );
            assert_eq!(c2_from_reduction(&st, &f, budget), counting::c2_from_reduction(&st, &f, budget));
        }
    }

    #[test]
    fn thread_count_does_not_matter() {
        let g = c2lab_core::graph::decomplete(&Graph::octahedron(), 0).unwrap();
        let f = field_of_size(5).unwrap();
        let a = with_threads(Some(1), || graph_point_count(&g, &f, u64::MAX).unwrap());
        let b = with_threads(Some(4), || graph_point_count(&g, &f, u64::MAX).unwrap());
        assert_eq!(a, b);
    }
}
