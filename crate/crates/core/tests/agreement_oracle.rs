use biis_core::agreement::{check_protocol, eps_edges, run_agreement, Transitions};
use biis_core::subdivision::Limits;

/// Every offset table over {-1, 0, 1, 2}, one row per process and one column
/// per reading kind.
fn all_tables() -> impl Iterator<Item = Transitions> {
    let values = [-1i64, 0, 1, 2];
    (0..4usize.pow(6)).map(move |mut code| {
        let mut offset = [[0i64; 3]; 2];
        for row in offset.iter_mut() {
            for cell in row.iter_mut() {
                *cell = values[code % 4];
                code /= 4;
            }
        }
        Transitions { offset }
    })
}

#[test]
fn exactly_one_small_table_solves_agreement() {
    let l = Limits::default();
    let winners: Vec<Transitions> = all_tables()
        .filter(|t| (1..=3).all(|r| check_protocol(r, t, &l, false).unwrap().all_pass()))
        .collect();
    assert_eq!(winners, vec![Transitions::default()]);
}

#[test]
fn default_table_holds_for_more_rounds() {
    let l = Limits::default();
    for r in 1..=6 {
        let rep = run_agreement(r, &l, false).unwrap();
        assert!(rep.all_pass(), "r = {r}: {:?}", rep.checks);
        assert_eq!(rep.run.unwrap().complex.facets().len() as u64, eps_edges(r));
    }
    assert_eq!(eps_edges(5), 243);
}

#[test]
fn zero_rounds_are_rejected() {
    assert!(check_protocol(0, &Transitions::default(), &Limits::default(), false).is_err());
}
