//! End-to-end paths across modules.

use geosym::*;
use num_rational::Ratio;

#[test]
fn csv_to_ratio_series() {
    let sine = generate(&GeneratorSpec::with_duration(
        GeneratorKind::Sine {
            amplitude: 1.0,
            frequency_hz: 2.0,
            phase: 0.0,
        },
        64.0,
        8.0,
    ))
    .unwrap()
    .with_label("sine");
    let noise = generate(
        &GeneratorSpec::with_duration(GeneratorKind::WhiteNoise { sigma: 1.0 }, 64.0, 8.0).seed(3),
    )
    .unwrap()
    .with_label("noise");
    let bytes = write_signals_csv(&[sine.clone(), noise.clone()]).unwrap();
    let table = parse_csv(
        std::str::from_utf8(&bytes).unwrap(),
        "mem",
        &CsvOptions::default(),
    )
    .unwrap();
    assert_eq!(table.channels(), &[sine.clone(), noise]);

    let window = WindowSpec::from_seconds(2.0, 1.0, 64.0).unwrap();
    let a = ratio_series(&table.channels()[0], window, &MeasureOptions::default()).unwrap();
    assert_eq!(a.ratio.len(), 7);
    assert_eq!(a.ratio.window_starts()[1], 1.0);
    let direct = semantic_entropy(&symbolize(&sine.samples()[64..192], 0.0).unwrap()).unwrap();
    assert_eq!(a.entropy.values()[1], Some(direct));
}

#[test]
fn exact_and_float_symbols_agree_on_integers() {
    let ints: Vec<i64> = vec![0, 3, 3, 1, -4, -4, -4, 2, 9, 9, 5];
    let exact: Vec<Exact> = ints.iter().map(|&v| Ratio::from_integer(v)).collect();
    let float = Signal64::from_integers(&ints, 1.0).unwrap();
    let a = symbolize(&exact, Ratio::from_integer(0)).unwrap();
    let b = symbolize(float.samples(), 0.0).unwrap();
    let c = symbolize(&float.cast::<f32>().unwrap().into_samples(), 0.0).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
    let m = count_transitions(&a).unwrap();
    assert_eq!(m.total(), a.len() as u64 - 1);
}

#[test]
fn exact_information_power() {
    let xs: Vec<Exact> = [0, 1, 0, 1, 0]
        .iter()
        .map(|&v| Ratio::from_integer(v))
        .collect();
    assert_eq!(
        information_power(&xs, Product::Left).unwrap(),
        Ratio::from_integer(2)
    );
    let half: Vec<Exact> = xs.iter().map(|v| v / 2).collect();
    assert_eq!(
        information_power(&half, Product::Left).unwrap(),
        Ratio::new(1, 2)
    );
}

#[test]
fn report_from_analysis_is_stable() {
    let signal = generate(&GeneratorSpec::seizure_surrogate(7)).unwrap();
    let window = WindowSpec::from_seconds(2.0, 2.0, 256.0).unwrap();
    let build = || {
        let a = ratio_series(&signal, window, &MeasureOptions::default()).unwrap();
        let mut report = report::AnalysisReport::new("ratio", None, report::Parameters::default());
        report.channels.push(report::ChannelReport {
            name: "s".into(),
            samples: signal.len(),
            minimum: Some(locate_min(&a.ratio).unwrap()),
            series: vec![a.entropy, a.power, a.ratio],
            ..Default::default()
        });
        write_report(&report, Format::Json).unwrap()
    };
    assert_eq!(build(), build());
}
