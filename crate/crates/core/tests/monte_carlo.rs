use asianvol::{forward_price, mc_asian_price, MarketParams, McConfig, OptionSide};

fn case1() -> MarketParams {
    MarketParams::new(2.0, 0.02, 0.0, 0.1, 1.0).unwrap()
}

#[test]
fn antithetic_reduces_standard_error() {
    let p = case1();
    let base = McConfig {
        paths: 100_000,
        steps: 50,
        seed: 3,
        ..McConfig::default()
    };
    let anti = mc_asian_price(2.0, &p, OptionSide::Call, &base).unwrap();
    let plain = mc_asian_price(
        2.0,
        &p,
        OptionSide::Call,
        &McConfig {
            antithetic: false,
            ..base
        },
    )
    .unwrap();
    assert!(
        anti.std_error < plain.std_error,
        "{} vs {}",
        anti.std_error,
        plain.std_error
    );
    assert!((anti.price - plain.price).abs() < 3.0 * (anti.std_error + plain.std_error));
}

#[test]
fn trapezoid_bias_is_second_order() {
    // With a vanishing vol the simulated average is the trapezoid rule
    // applied to the deterministic forward curve.
    let p = MarketParams::new(1.0, 0.5, 0.0, 1e-9, 2.0).unwrap();
    let exact = forward_price(&p);
    let bias = |steps| {
        let c = McConfig {
            paths: 2,
            steps,
            seed: 1,
            ..McConfig::default()
        };
        mc_asian_price(0.5, &p, OptionSide::Call, &c).unwrap().mean_average - exact
    };
    let (b1, b2) = (bias(16), bias(32));
    assert!(b1 > 0.0 && b2 > 0.0);
    let ratio = b1 / b2;
    assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn seeds_reproduce_and_differ() {
    let p = case1();
    let c = McConfig {
        paths: 20_000,
        steps: 20,
        seed: 11,
        ..McConfig::default()
    };
    let a = mc_asian_price(2.0, &p, OptionSide::Put, &c).unwrap();
    let b = mc_asian_price(2.0, &p, OptionSide::Put, &c).unwrap();
    assert_eq!(a.price.to_bits(), b.price.to_bits());
    let d = mc_asian_price(2.0, &p, OptionSide::Put, &McConfig { seed: 12, ..c }).unwrap();
    assert_ne!(a.price, d.price);
}

#[test]
fn put_call_parity_on_paths() {
    // Call minus put equals the discounted mean of A_T − K path by path.
    let p = case1();
    let c = McConfig {
        paths: 10_000,
        steps: 30,
        seed: 5,
        ..McConfig::default()
    };
    let call = mc_asian_price(2.0, &p, OptionSide::Call, &c).unwrap();
    let put = mc_asian_price(2.0, &p, OptionSide::Put, &c).unwrap();
    let df = p.discount_factor();
    assert!((call.price - put.price - df * (call.mean_average - 2.0)).abs() < 1e-13);
}
