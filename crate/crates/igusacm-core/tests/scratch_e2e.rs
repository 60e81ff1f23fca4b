use igusacm_core::classpoly::*;
use igusacm_core::cmfield::CMFieldSpec;
use std::time::Instant;

#[test]
fn zeta5_default_constants() {
    let spec = CMFieldSpec::new(5, 10, 2).unwrap();
    let config = PipelineConfig::default();
    let t0 = Instant::now();
    let out = igusa_class_polynomials_serial(&spec, &config).unwrap();
    println!("elapsed: {:.2?}", t0.elapsed());
    println!("audit: u={:?} p={} r={:?} log2D={}", out.audit.u, out.audit.p, out.audit.r, log2_ceil_int(&out.audit.d));
    println!("H1 = {:?} / {}", out.h1.nums.iter().map(|x| x.to_string()).collect::<Vec<_>>(), out.h1.den);
    assert_eq!(out.h1.nums, vec![0.into(), 1.into()]);
}
