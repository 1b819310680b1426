use bellbound_core::detect::{optimize_threshold, DetectOptions, ThresholdMode};
use bellbound_core::known;
use bellbound_core::seesaw::Field;

fn main() {
    let t0 = std::time::Instant::now();
    let opts = DetectOptions { field: Field::Complex, seed: 1, ..DetectOptions::default() };
    let search = optimize_threshold(&known::i3322(), ThresholdMode::AsymmetricB, &opts).unwrap();
    let r = &search.report;
    println!(
        "i3322 asym: eta_asym_b={:?} eta_sym={:?} q={:.7} m_a={:.7} combos={} exhausted={} [{:?}]",
        r.eta_asym_b, r.eta_sym, r.q, r.m_a, search.combos_searched, search.budget_exhausted, t0.elapsed()
    );
    println!("reduced scenario: {}x{}, L'={}", search.reduced.scenario.m_a, search.reduced.scenario.m_b, search.reduced_bound);

    let t1 = std::time::Instant::now();
    let opts = DetectOptions { field: Field::Real, seed: 1, ..DetectOptions::default() };
    let search = optimize_threshold(&known::i3322(), ThresholdMode::AsymmetricB, &opts).unwrap();
    println!(
        "i3322 asym real: eta_asym_b={:?} combos={} [{:?}]",
        search.report.eta_asym_b, search.combos_searched, t1.elapsed()
    );
}
