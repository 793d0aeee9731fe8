#include "fixtures.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <stdexcept>

namespace cl4::testkit {

const std::vector<ExerciseItem>& exercise_items() {
  static const std::vector<ExerciseItem> items = {
      {"1", "P \\/ ~P", true, true},
      {"2", "P !\\/ ~P", false, true},
      {"3", "P /\\ P -> P", true, true},
      {"4", "P -> P /\\ P", false, true},
      {"5", "P -> P !/\\ P", true, true},
      {"6", "(P !\\/ Q) /\\ (P !\\/ R) -> P !\\/ (Q /\\ R)", true, true},
      {"7", "P !\\/ (Q /\\ R) -> (P !\\/ Q) /\\ (P !\\/ R)", false, true},
      {"8", "p !\\/ (Q /\\ R) -> (p !\\/ Q) /\\ (p !\\/ R)", true, true},
      {"9", "p !/\\ (Q /\\ R) -> (p !/\\ Q) /\\ (p !/\\ R)", false, true},
      {"10", "(A x. P(x)) -> !A x. P(x)", true, false},
      {"11", "(!A x. P(x)) -> A x. P(x)", false, false},
      {"12a", "(E x. P(x)) !/\\ (E x. Q(x)) -> E x. (P(x) !/\\ Q(x))", true, false},
      {"12b", "(E x. (P(x) !/\\ Q(x))) -> (E x. P(x)) !/\\ (E x. Q(x))", true, false},
      {"13a", "(!A x. E y. P(x, y)) -> E y. !A x. P(x, y)", true, false},
      {"13b", "(E y. !A x. P(x, y)) -> !A x. E y. P(x, y)", true, false},
      {"14", "(A x. (P(x) /\\ Q(x))) -> (A x. P(x)) /\\ (A x. Q(x))", true, false},
      {"15", "(!A x. (P(x) /\\ Q(x))) -> (!A x. P(x)) /\\ (!A x. Q(x))", false, true},
      {"16", "(!A x. ((P(x) /\\ !A x. Q(x)) !/\\ ((!A x. P(x)) /\\ Q(x)))) -> (!A x. P(x)) /\\ (!A x. Q(x))",
       true, true},
  };
  return items;
}

const ExerciseItem& exercise(const std::string& label) {
  for (const auto& it : exercise_items())
    if (it.label == label) return it;
  throw std::out_of_range("no exercise item " + label);
}

Proof golden_choice_proof() {
  Proof p;
  p.system = System::CL4;
  p.steps = {
      {1, parse("p(z) -> p(z)"), RuleApplication::a(), {}},
      {2, parse("P(z) -> P(z)"), RuleApplication::c(*Address::parse("2."), *Address::parse("1."), "p"), {1}},
      {3, parse("!E y. (P(z) -> P(y))"), RuleApplication::b2(Address{}, Term::var("z")), {2}},
      {4, parse("!A x. !E y. (P(x) -> P(y))"), RuleApplication::a(), {3}},
  };
  return p;
}

Proof golden_blind_proof() {
  Proof p;
  p.system = System::CL4;
  p.steps = {
      {1, parse("E y. A x. (p(x) -> p(y))"), RuleApplication::a(), {}},
      {2, parse("E y. A x. (P(x) -> P(y))"), RuleApplication::c(*Address::parse("2."), *Address::parse("1."), "p"),
       {1}},
  };
  return p;
}

Proof p_implies_p_proof() {
  Proof p;
  p.system = System::CL4;
  p.steps = {
      {1, parse("p -> p"), RuleApplication::a(), {}},
      {2, parse("P -> P"), RuleApplication::c(*Address::parse("2."), *Address::parse("1."), "p"), {1}},
  };
  return p;
}

namespace {

void general_arities(const Formula& f, std::map<std::string, std::size_t>& out) {
  if (f.is_atom()) {
    if (f.letter().kind == LetterKind::General || f.letter().kind == LetterKind::Hybrid) {
      auto [it, fresh] = out.emplace(f.letter().name, f.args().size());
      if (!fresh && it->second != f.args().size())
        throw std::invalid_argument("letter " + f.letter().name + " used at two arities");
    }
    return;
  }
  for (const auto& k : f.kids()) general_arities(k, out);
}

std::string arg_list(const std::vector<std::string>& xs, const std::string& extra = "") {
  std::vector<std::string> all = xs;
  if (!extra.empty()) all.push_back(extra);
  if (all.empty()) return "";
  std::string s = "(";
  for (std::size_t i = 0; i < all.size(); ++i) s += (i ? ", " : "") + all[i];
  return s + ")";
}

// Every tuple over {0..universe-1} of length n.
void tuples(std::size_t n, std::size_t universe, const std::function<void(const std::vector<std::uint64_t>&)>& f) {
  std::vector<std::uint64_t> t(n, 0);
  while (true) {
    f(t);
    std::size_t i = 0;
    while (i < n && ++t[i] == universe) t[i++] = 0;
    if (i == n) return;
  }
}

void set_truth(Interpretation& I, const std::string& letter, const std::vector<std::uint64_t>& args, bool v) {
  std::vector<Term> ts;
  for (auto a : args) ts.push_back(Term::constant(a));
  I.elementary[ground_atom_key(Formula::atom(Letter::elementary(letter), ts))] = v;
}

}  // namespace

std::vector<Interpretation> interpretations_for(const Formula& f) {
  std::map<std::string, std::size_t> arity;
  general_arities(f, arity);
  std::vector<Interpretation> out(3);
  for (auto& I : out) I.universe = 2;
  std::size_t k = 0;
  for (const auto& [P, n] : arity) {
    std::string l(1, static_cast<char>(std::tolower(static_cast<unsigned char>(P[0]))));
    l += P.substr(1);
    std::vector<std::string> params;
    for (std::size_t i = 0; i < n; ++i) params.push_back("x" + std::to_string(i + 1));
    std::string a = l + "_a" + arg_list(params), b = l + "_b" + arg_list(params);
    out[0].general[P] = {params, parse(a + " !\\/ (" + b + " !/\\ " + l + "_c)")};
    out[1].general[P] = {params, parse("(!A y. " + l + "_d" + arg_list(params, "y") + ") !/\\ ~" + b)};
    out[2].general[P] = {params, parse(a)};
    tuples(n, 2, [&](const std::vector<std::uint64_t>& t) {
      std::uint64_t sum = k;
      for (auto c : t) sum += c;
      for (auto& I : out) {
        set_truth(I, l + "_a", t, sum % 2 == 0);
        set_truth(I, l + "_b", t, !t.empty() && t[0] == 1);
      }
    });
    set_truth(out[0], l + "_c", {}, true);
    tuples(n + 1, 2, [&](const std::vector<std::uint64_t>& t) { set_truth(out[1], l + "_d", t, t.back() == 0); });
    ++k;
  }
  for (auto& I : out) I.validate();
  return out;
}

std::string data_dir() { return CL4_TEST_DATA; }

}  // namespace cl4::testkit
