use std::sync::OnceLock;

use regex::Regex;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

struct Patterns {
    markup: Regex,
    entity: Regex,
    url: Regex,
    leading_retweet: Regex,
    mention: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| Patterns {
        markup: Regex::new(r"<[^<>]*>").expect("valid regex"),
        entity: Regex::new(r"&(?:[A-Za-z]+|#[0-9]+|#x[0-9A-Fa-f]+);").expect("valid regex"),
        url: Regex::new(r"(?i)(?:https?://|www\.)\S*").expect("valid regex"),
        leading_retweet: Regex::new(r"^\s*RT\b").expect("valid regex"),
        mention: Regex::new(r"@\w+").expect("valid regex"),
    })
}

/// Normalizes raw tweet text.
///
/// Removes markup tags and HTML entities, links (`http://`, `https://`,
/// `www.` up to the next whitespace), `@mentions`, and a leading `RT`
/// retweet marker. Accented letters are folded to ASCII, other non-ASCII
/// letters are dropped, and every remaining non-alphanumeric character
/// becomes a space. The result is lowercased, whitespace is collapsed, and
/// words made only of digits are removed.
pub fn clean(raw: &str) -> String {
    let p = patterns();
    let s = p.markup.replace_all(raw, " ");
    let s = p.entity.replace_all(&s, " ");
    let s = p.url.replace_all(&s, " ");
    let s = p.leading_retweet.replace(&s, " ");
    let s = p.mention.replace_all(&s, " ");

    let mut folded = String::with_capacity(s.len());
    for c in s.nfd() {
        if c.is_ascii_alphanumeric() {
            folded.push(c.to_ascii_lowercase());
        } else if c.is_ascii() {
            folded.push(' ');
        } else if is_combining_mark(c) {
            // accent stripped from the preceding base letter
        } else if let Some(rep) = fold_special(c) {
            folded.push_str(rep);
        } else if c.is_alphanumeric() {
            // non-Latin letters and digits are dropped
        } else {
            folded.push(' ');
        }
    }

    let mut out = String::with_capacity(folded.len());
    for word in folded.split_whitespace() {
        if word.bytes().all(|b| b.is_ascii_digit()) {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Latin letters that canonical decomposition does not reduce to ASCII.
fn fold_special(c: char) -> Option<&'static str> {
    Some(match c {
        'ß' => "ss",
        'æ' | 'Æ' => "ae",
        'œ' | 'Œ' => "oe",
        'ø' | 'Ø' => "o",
        'ł' | 'Ł' => "l",
        'đ' | 'Đ' => "d",
        'ı' => "i",
        _ => return None,
    })
}

/// Splits cleaned text on whitespace.
pub fn tokenize(cleaned: &str) -> Vec<String> {
    cleaned.split_whitespace().map(str::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cleaning_examples() {
        assert_eq!(clean(""), "");
        assert_eq!(clean("Check https://t.co/x NOW!!"), "check now");
        assert_eq!(
            clean("RT @bedground: Please RT – Food needed for shelter in NC"),
            "please rt food needed for shelter in nc"
        );
    }

    #[test]
    fn markup_hashtags_numbers_and_accents() {
        assert_eq!(clean("<b>Help</b> &amp; food"), "help food");
        assert_eq!(clean("#Harvey relief"), "harvey relief");
        assert_eq!(clean("Need 24 beds for 3rd street"), "need beds for 3rd street");
        assert_eq!(clean("Café CRÈME straße"), "cafe creme strasse");
        assert_eq!(clean("help🙏please 東京"), "help please");
        assert_eq!(clean("see www.redcross.org today"), "see today");
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("check now"), ["check", "now"]);
        assert!(tokenize("  ").is_empty());
        assert_eq!(
            tokenize("food needed for shelter"),
            ["food", "needed", "for", "shelter"]
        );
    }

    proptest! {
        #[test]
        fn clean_is_idempotent(s in "\\PC{0,80}") {
            let once = clean(&s);
            prop_assert_eq!(clean(&once), once.clone());
            prop_assert!(once.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b' '));
        }

        #[test]
        fn clean_is_idempotent_on_tweetish_text(s in "(RT |@[a-z]{1,5} |#[A-Za-z]{1,6} |https://t\\.co/[a-z0-9]{3} |[A-Za-z]{1,8}[!?.,]? |[0-9]{1,3} ){0,12}") {
            let once = clean(&s);
            prop_assert_eq!(clean(&once), once);
        }
    }
}
