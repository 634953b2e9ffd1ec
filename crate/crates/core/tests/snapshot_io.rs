use hele_shaw_limit::io::{format_sweep_report, read_snapshot, write_snapshot};
use hele_shaw_limit::sweep::{run_sweep, SweepConfig};
use hele_shaw_limit::{run, GrowthPair, OutputSchedule, Preset, SimConfig, Snapshot};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn solver_snapshots_roundtrip_bit_exact() {
    let mut cfg = SimConfig::new(Preset::TwoBlock, 0.3, GrowthPair::grfig());
    cfg.num_cells = 80;
    cfg.t_max = 0.2;
    cfg.output = OutputSchedule::Count(3);
    let traj = run(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let path = dir.path().join(format!("s{k}.csv"));
        write_snapshot(snap, &path).unwrap();
        let back = read_snapshot(&path).unwrap();
        for (a, b) in [(&snap.x, &back.x), (&snap.n1, &back.n1), (&snap.n2, &back.n2), (&snap.p, &back.p)] {
            assert!(a.iter().zip(b).all(|(u, v)| u.to_bits() == v.to_bits()));
        }
        assert_eq!(snap.time.to_bits(), back.time.to_bits());
        assert_eq!(snap.summary, back.summary);
    }
}

fn random_snapshot(seed: u64, m: usize) -> Snapshot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = hele_shaw_limit::make_grid(rng.gen_range(0.5..10.0), m).unwrap();
    let n1: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..0.5)).collect();
    let n2: Vec<f64> = (0..m).map(|_| rng.gen::<f64>() * 0.49).collect();
    let eps = rng.gen_range(1e-4..2.0);
    let state = hele_shaw_limit::TwoSpeciesState::new(rng.gen_range(0.0..5.0), n1, n2).unwrap();
    Snapshot::from_state(&grid, &state, eps).unwrap()
}

proptest! {
    #[test]
    fn random_snapshots_roundtrip(seed in any::<u64>(), m in 3usize..200) {
        let snap = random_snapshot(seed, m);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_snapshot(&snap, &path).unwrap();
        let back = read_snapshot(&path).unwrap();
        prop_assert_eq!(snap.time.to_bits(), back.time.to_bits());
        prop_assert_eq!(&snap.n1, &back.n1);
        prop_assert_eq!(&snap.n2, &back.n2);
        prop_assert_eq!(&snap.p, &back.p);
        prop_assert_eq!(&snap.x, &back.x);
    }
}

#[test]
fn sweep_report_is_deterministic() {
    let mut base = SimConfig::new(Preset::TwoBlock, 1.0, GrowthPair::grfig());
    base.num_cells = 50;
    base.t_max = 0.2;
    let config = SweepConfig {
        base,
        epsilons: vec![1.0, 0.3, 0.1],
        cells: Vec::new(),
        probe_times: vec![0.1, 0.2],
    };
    let a = format_sweep_report(&run_sweep(&config).unwrap());
    let b = format_sweep_report(&run_sweep(&config).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 4);
}
