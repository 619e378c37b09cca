use regret_core::tournament::{build_kuhn_roster, round_robin};

fn main() {
    let (game, roster) = build_kuhn_roster();
    let report = round_robin(&game, &roster).expect("kuhn roster is valid");
    print!("{}", report.to_table());
    for (k, round) in report.iro_rounds.iter().enumerate() {
        println!("IRO round {}: eliminated {:?}", k + 1, round.eliminated);
    }
}
