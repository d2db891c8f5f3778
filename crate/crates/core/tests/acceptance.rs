use interval_transfer::acceptance::run;

fn check(id: u8) {
    let r = run(id).unwrap();
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_1_retract_identities() {
    check(1);
}

#[test]
fn criterion_2_bernoulli_transfer() {
    check(2);
}

#[test]
fn criterion_3_stabilization() {
    check(3);
}

#[test]
fn criterion_4_coherence() {
    check(4);
}

#[test]
fn criterion_5_lawrence_sullivan() {
    check(5);
}

#[test]
fn criterion_6_gauge_and_quillen() {
    check(6);
}

#[test]
fn criterion_7_concordance_defects() {
    check(7);
}

#[test]
fn criterion_8_decoration() {
    check(8);
}

#[test]
fn criterion_9_convolution_linf() {
    check(9);
}
