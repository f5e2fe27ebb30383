#include <array>
#include <string>
#include <unordered_map>

#include "anxpipe/linguafeat/text.hpp"

namespace anxpipe::feat {

namespace {

constexpr std::string_view kFunction =
    "i me my mine myself you your yours yourself he him his himself she her hers herself it its itself "
    "we us our ours ourselves they them their theirs themselves this that these those who whom whose which "
    "what a an the some any every each either neither no none all both few many much more most several "
    "and but or so nor yet for because although though when whenever while if unless since whereas until "
    "whether than as of in on at by with from about into onto upon through after over between out against "
    "during without before under around among within toward towards across behind beyond near off up down "
    "to like via per despite except there here not yes oh ok okay hi hello hey please thanks lol im idk";

constexpr std::string_view kVerb =
    "be am is are was were been being have has had having do does did done doing will would shall should "
    "can could may might must go goes went gone get gets got gotten make makes made take takes took taken "
    "come comes came see sees saw seen know knows knew known think thinks thought say says said tell tells "
    "told give gives gave given find finds found feel feels felt want wants need needs try tries tried "
    "ask asks leave leaves left run runs ran walk walks keep keeps kept let lets begin began begun seem seems "
    "help helps talk talks turn turns start starts show shows hear hears heard play plays move moves live "
    "lives believe believes bring brings brought happen happens write wrote written sit sat stand stood lose "
    "lost pay paid meet met stop stops speak spoke spoken read understand understood cry cries avoid avoids "
    "panic panics worry worries freak hate hates love loves like likes sleep slept eat ate wait waits call "
    "calls hope hopes fear fears struggle struggles diagnosed became become becomes sweat shake shook";

constexpr std::string_view kAdj =
    "good bad happy sad tired anxious nervous scared afraid fine new old big small great little high low "
    "long short social hard easy better worse best worst able important different large young early late "
    "public bad same real sure clear whole free full certain awkward weird normal terrible awful horrible "
    "okay calm quiet shy lonely alone embarrassed worried stressed panicked upset angry glad sick ill "
    "difficult simple strange other own next last first only";

constexpr std::string_view kAdv =
    "very really just also never always often too quite still even already almost now again ever maybe "
    "sometimes usually soon only then once perhaps rather pretty so somewhat anymore constantly literally "
    "actually basically probably definitely finally";

using Table = std::unordered_map<std::string, PosClass>;

void add_words(Table& table, std::string_view words, PosClass pos) {
  std::size_t i = 0;
  while (i < words.size()) {
    const auto j = words.find(' ', i);
    const auto w = words.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i);
    if (!w.empty()) table.emplace(std::string(w), pos);  // first listing wins
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
}

const Table& table() {
  static const Table t = [] {
    Table out;
    add_words(out, kFunction, PosClass::function);
    add_words(out, kVerb, PosClass::verb);
    add_words(out, kAdv, PosClass::adv);
    add_words(out, kAdj, PosClass::adj);
    return out;
  }();
  return t;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() + 1 && w.substr(w.size() - suffix.size()) == suffix;
}

}  // namespace

PosClass lookup_pos(std::string_view lower_word) {
  if (const auto it = table().find(std::string(lower_word)); it != table().end()) return it->second;
  // contractions: classify by the host word ("can't" -> verb, "i'm" -> function)
  if (const auto apos = lower_word.find('\''); apos != std::string_view::npos && apos > 0) {
    const auto host = table().find(std::string(lower_word.substr(0, apos)));
    if (host != table().end()) return host->second;
    if (lower_word.substr(apos) == "'t") return PosClass::verb;
  }
  for (std::string_view s : {"ly"})
    if (ends_with(lower_word, s)) return PosClass::adv;
  for (std::string_view s : {"ing", "ed", "ize", "ise"})
    if (ends_with(lower_word, s)) return PosClass::verb;
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ish", "ant", "ent"})
    if (ends_with(lower_word, s)) return PosClass::adj;
  return PosClass::noun;
}

}  // namespace anxpipe::feat
