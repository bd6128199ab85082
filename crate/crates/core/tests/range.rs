//! Range DFT, peak detection, binary integration and Range-OMP.

use csfmcw::range::*;
use csfmcw::scene::*;
use csfmcw::synth::*;
use csfmcw::Complex64;

fn close_targets() -> TargetScene {
    TargetScene {
        targets: [(48.8, 12.0, 5.0), (50.0, -30.0, -12.0), (51.2, 3.0, 17.0)]
            .iter()
            .enumerate()
            .map(|(i, &(r, v, a))| Target {
                range_m: r,
                velocity_mps: v,
                aoa_rad: f64::to_radians(a),
                gain: Complex64::from_polar(1.0, 1.1 * i as f64),
            })
            .collect(),
    }
}

fn cube(scene: &TargetScene, snr_db: Option<f64>, seed: u64) -> (RadarConfig, IfCube) {
    let c = RadarConfig::automotive_24ghz();
    let g = sample_sla(&c, seed);
    let s = sample_chirp_schedule(c.chirps_transmitted, c.chirps_per_cpi_max, seed).unwrap();
    let noise = snr_db.map_or(NoiseSpec::noiseless(), NoiseSpec::from_snr_db);
    (c.clone(), synthesize_approx(scene, &g, &s, &c, &noise, seed).unwrap())
}

#[test]
fn unitary_dft_preserves_energy() {
    let (_, cube) = cube(&close_targets(), Some(10.0), 1);
    let spectrum = range_dft(&cube);
    let e_time: f64 = cube.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let e_freq: f64 = (0..spectrum.rows())
        .flat_map(|r| spectrum.row(r).to_vec())
        .map(|z| z.norm_sqr())
        .sum();
    assert!((e_time - e_freq).abs() < 1e-9 * e_time);
    assert_eq!(spectrum.samples_read(), 16000);
}

#[test]
fn on_bin_target_concentrates_in_one_bin() {
    let scene = TargetScene {
        targets: vec![Target {
            range_m: 30.0,
            velocity_mps: 20.0,
            aoa_rad: 0.2,
            gain: Complex64::new(1.0, 0.0),
        }],
    };
    let (_, cube) = cube(&scene, None, 2);
    let spectrum = range_dft(&cube);
    for r in 0..spectrum.rows() {
        let row = spectrum.row(r);
        // All energy, √N in amplitude, lands in bin 50.
        assert!((row[50].norm() - 200f64.sqrt()).abs() < 1e-9);
        let rest: f64 = row
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != 50)
            .map(|(_, z)| z.norm())
            .sum();
        assert!(rest < 1e-8);
    }
}

#[test]
fn three_close_targets_land_in_distinct_bins() {
    let (c, cube) = cube(&close_targets(), None, 3);
    let spectrum = range_dft(&cube);
    let per_row: Vec<Vec<usize>> = (0..spectrum.rows())
        .map(|r| detect_bins(spectrum.row(r), DetectionThreshold::Relative(0.5)))
        .collect();
    let det = binary_integrate(&per_row, spectrum.bins(), 0.5, &c).unwrap();
    let expect: Vec<usize> = [48.8, 50.0, 51.2]
        .iter()
        .map(|&r| range_to_bin(r, &c).unwrap())
        .collect();
    assert_eq!(expect, vec![81, 83, 85]);
    assert_eq!(det.detected_bins, expect);
    for (est, truth) in det.estimated_ranges_m.iter().zip([48.8, 50.0, 51.2]) {
        assert!((est - truth).abs() <= 0.3 + 1e-12);
    }
}

#[test]
fn bin_range_round_trip() {
    let c = RadarConfig::automotive_24ghz();
    for l in 0..200 {
        let r = bin_to_range(l, &c).unwrap();
        assert!((r - 0.6 * l as f64).abs() < 1e-9);
        assert_eq!(range_to_bin(r, &c).unwrap(), l);
    }
    assert!(bin_to_range(200, &c).is_err());
    assert!(range_to_bin(-1.0, &c).is_err());
    // Half-bin ties round away from zero.
    assert_eq!(range_to_bin(0.3, &c).unwrap(), 1);
}

#[test]
fn detection_keeps_equal_neighbours() {
    let row: Vec<Complex64> = [0.0, 1.0, 1.0, 0.0, 0.2, 0.0]
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    assert_eq!(detect_bins(&row, DetectionThreshold::Relative(0.5)), vec![1, 2]);
    assert_eq!(detect_bins(&row, DetectionThreshold::Absolute(0.1)), vec![1, 2, 4]);
    assert!(detect_bins(&[Complex64::new(0.0, 0.0); 4], DetectionThreshold::Relative(0.5)).is_empty());
}

#[test]
fn binary_integration_validates_input() {
    let c = RadarConfig::automotive_24ghz();
    assert!(binary_integrate(&[vec![1]], 200, 0.0, &c).is_err());
    assert!(binary_integrate(&[vec![250]], 200, 0.5, &c).is_err());
    let d = binary_integrate(&[vec![3, 3], vec![3], vec![7]], 200, 0.6, &c).unwrap();
    assert_eq!(d.votes[3], 2);
    assert_eq!(d.detected_bins, vec![3]);
}

#[test]
fn range_omp_resolves_sub_bin_targets() {
    let (c, cube) = cube(&close_targets(), None, 4);
    // Two-thirds of a DFT bin: fine enough to hold the targets, coarse enough for greedy selection.
    let grid: Vec<f64> = (0..=50).map(|k| 40.0 + 0.4 * k as f64).collect();
    let est = range_omp(cube.row(0), &grid, &c, &RangeOmpParams::default()).unwrap();
    let mut ranges: Vec<f64> = est.iter().map(|e| e.range_m).collect();
    ranges.sort_by(f64::total_cmp);
    assert_eq!(ranges.len(), 3, "{ranges:?}");
    for (r, truth) in ranges.iter().zip([48.8, 50.0, 51.2]) {
        assert!((r - truth).abs() < 1e-9);
    }
    for e in &est {
        assert!((e.coefficient.norm() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn range_dictionary_atoms_match_the_beat_frequency() {
    let c = RadarConfig::automotive_24ghz();
    let d = build_range_dictionary(&[50.0], &c).unwrap();
    let t = Target {
        range_m: 50.0,
        velocity_mps: 0.0,
        aoa_rad: 0.0,
        gain: Complex64::new(1.0, 0.0),
    };
    let w = normalized_frequencies(&t, &c).omega_range;
    for k in 0..200 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * w * k as f64);
        assert!((d.get(k, 0) - z).norm() < 1e-9);
    }
    assert!(build_range_dictionary(&[], &c).is_err());
}
