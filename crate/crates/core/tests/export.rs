use fdasim::export::{csv_string, pgm_bytes, CsvScale};
use fdasim::{
    chebyshev_taper, evaluate_raster, make_phased_array, GridSpec, PatternMode, PropagationEnv,
    PulseSpec,
};

fn raster() -> fdasim::RasterGrid {
    let w = chebyshev_taper(8, 25.0).unwrap();
    let cfg = make_phased_array(8, 0.015, 10e9, w, vec![0.0; 8]).unwrap();
    let env = PropagationEnv::with_wave_speed(3e8).unwrap();
    let pulse = PulseSpec::gaussian(-0.5e-3, 0.1e-3).unwrap();
    let grid = GridSpec {
        r_min_m: 100e3,
        r_max_m: 200e3,
        n_range: 40,
        n_theta: 31,
        ..GridSpec::default()
    };
    evaluate_raster(&cfg, &env, Some(&pulse), PatternMode::Pulsed, &grid).unwrap()
}

#[test]
fn csv_round_trips_to_nine_digits() {
    let r = raster();
    let text = csv_string(&r, CsvScale::Linear).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("range_m,angle_deg,value"));
    let mut count = 0;
    for (k, line) in lines.enumerate() {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let (i, j) = (k / r.n_theta(), k % r.n_theta());
        let close = |a: f64, b: f64| (a - b).abs() <= 5e-9 * b.abs().max(f64::MIN_POSITIVE);
        assert!(close(cols[0], r.spec.range_at(i)));
        assert!(
            close(cols[1], r.spec.theta_at(j).to_degrees()) || r.spec.theta_at(j).abs() < 1e-15
        );
        assert!(close(cols[2], r.get(i, j)) || r.get(i, j) == 0.0 && cols[2] == 0.0);
        count += 1;
    }
    assert_eq!(count, r.values().len());
}

#[test]
fn db_csv_is_clamped_and_peaks_at_zero() {
    let r = raster();
    let text = csv_string(&r, CsvScale::Db { floor_db: -40.0 }).unwrap();
    let vals: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(vals.iter().all(|v| (-40.0..=0.0).contains(v)));
    assert!(vals.contains(&0.0));
}

#[test]
fn pgm_dimensions_and_payload() {
    let r = raster();
    let (bytes, _) = pgm_bytes(&r, -60.0).unwrap();
    let header_end = bytes.windows(5).position(|w| w == b"\n255\n").unwrap() + 5;
    let header = std::str::from_utf8(&bytes[..header_end]).unwrap();
    assert!(header.contains("\n31 40\n"));
    assert!(header.contains("mode=pulsed"));
    assert_eq!(bytes.len() - header_end, 31 * 40);
    assert!(bytes[header_end..].contains(&255));
    assert!(pgm_bytes(&r, 0.0).is_err());
}
