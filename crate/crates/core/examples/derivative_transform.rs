use proximity_forest::data::TimeSeries;
use proximity_forest::transform::{apply, derivative_values, TransformKind};

fn main() {
    let ramp: Vec<f64> = (0..6).map(|t| 3.0 * t as f64 - 1.0).collect();
    println!("ramp        {ramp:?}");
    println!("derivative  {:?}", derivative_values(&ramp).unwrap());

    let s = TimeSeries::new(vec![0.0, 1.0, 4.0, 9.0, 16.0, 25.0], None).unwrap();
    for t in TransformKind::ALL {
        println!("{:<16} {:?}", t.name(), apply(t, &s));
    }
    // the derivative is cached on the series after the first request
    assert!(std::ptr::eq(s.derivative(), apply(TransformKind::FirstDerivative, &s)));
}
