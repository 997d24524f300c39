//! Cleaning, tokenization, stop-word removal and stemming of raw tweets.

use disaster_sentiment::preprocess::{clean, tokenize, Preprocessor, StopList};

fn main() {
    let tweets = [
        "RT @redcross: Shelters are OPEN tonight in Houston!! https://t.co/xyz #HurricaneHarvey",
        "Still waiting for food deliveries... nobody has come to our street \u{1F621}",
        "Thank you volunteers for the evacuation buses, families are finally safe",
    ];
    let pre = Preprocessor::new(StopList::default(), true);
    for t in tweets {
        let cleaned = clean(t);
        println!("raw:     {t}");
        println!("cleaned: {cleaned}");
        println!("tokens:  {:?}", tokenize(&cleaned));
        println!("final:   {:?}\n", pre.process_text(t));
    }
}
