#![allow(dead_code)]

use satcts_core::environment::{
    dft_codebook, synth_channel, truth_table, Environment, Perturbation, SynthParams, TruthTable,
};
use satcts_core::{ProblemDims, RateSet};

pub struct World {
    pub env: Environment,
    pub truth: TruthTable,
}

/// Small single-station synthetic world with `N = 8` antennas.
pub fn world(
    ues: usize,
    beams: usize,
    rates: &[f64],
    horizon: u64,
    power: f64,
    seed: u64,
) -> World {
    let dims = ProblemDims::new(ues, 1, beams, rates.len(), horizon).unwrap();
    let n = 8;
    let ch = synth_channel(
        seed,
        &SynthParams {
            ues,
            stations: 1,
            antennas: n,
            paths: 2,
            d_over_lambda: 0.5,
        },
    )
    .unwrap()
    .with_link_budget(vec![power], vec![1.0; ues])
    .unwrap()
    .with_perturbation(Perturbation::Relative(0.6))
    .unwrap();
    let env = Environment::new(
        dims,
        ch,
        dft_codebook(n, beams, 0.5),
        RateSet::new(rates.to_vec()).unwrap(),
    )
    .unwrap();
    let truth = truth_table(&env, 20_000, 99).unwrap();
    World { env, truth }
}
