#include <dw/ca.hh>
#include <dw/error.hh>

#include <sstream>

namespace dw
{
  namespace
  {
    std::vector<std::string> tokens(const std::string& s)
    {
      std::istringstream in(s);
      std::vector<std::string> out;
      std::string t;
      while (in >> t)
        out.push_back(t);
      return out;
    }

    unsigned number(const std::string& s, const std::string& where)
    {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        fail(ErrorCode::SyntaxError, "expected a number, got '" + s + "'" + where);
      return static_cast<unsigned>(std::stoul(s));
    }
  }

  CounterAutomaton parse_ca(std::string_view text)
  {
    CounterAutomaton c;
    bool have_alphabet = false, have_counters = false;
    std::optional<std::string> init;
    std::vector<std::string> accepting;
    auto loc = [&](const std::string& name) {
      if (auto q = c.find(name))
        return *q;
      return c.add_location(name);
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw))
      {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos)
          raw.resize(hash);
        auto toks = tokens(raw);
        if (toks.empty())
          continue;
        const auto where = " (line " + std::to_string(lineno) + ")";
        const auto& head = toks[0];
        if (head == "alphabet:")
          {
            c.alphabet = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
            have_alphabet = true;
          }
        else if (head == "counters:")
          {
            if (toks.size() != 2)
              fail(ErrorCode::SyntaxError, "counters: expects one number" + where);
            c.counters = number(toks[1], where);
            have_counters = true;
          }
        else if (head == "init:")
          {
            if (toks.size() != 2)
              fail(ErrorCode::SyntaxError, "init: expects one location" + where);
            init = toks[1];
            loc(toks[1]);
          }
        else if (head == "accepting:")
          for (std::size_t i = 1; i < toks.size(); ++i)
            {
              accepting.push_back(toks[i]);
              loc(toks[i]);
            }
        else if (head == "locations:")
          for (std::size_t i = 1; i < toks.size(); ++i)
            loc(toks[i]);
        else
          {
            if (!have_alphabet)
              fail(ErrorCode::SyntaxError, "transition before alphabet: header" + where);
            if (toks.size() != 5)
              fail(ErrorCode::SyntaxError, "expected 'from letter op counter to'" + where);
            std::optional<Letter> letter;
            if (toks[1] != "eps")
              {
                auto l = c.alphabet.find(toks[1]);
                if (!l)
                  fail(ErrorCode::UnknownLetter, "unknown letter '" + toks[1] + "'" + where);
                letter = *l;
              }
            const unsigned counter = number(toks[3], where);
            const CaLocation from = loc(toks[0]);
            const CaLocation to = loc(toks[4]);
            const auto& op = toks[2];
            if (op == "inc")
              c.add(from, letter, {CounterOp::Inc, counter}, to);
            else if (op == "dec")
              c.add(from, letter, {CounterOp::Dec, counter}, to);
            else if (op == "ifz")
              c.add(from, letter, {CounterOp::Ifz, counter}, to);
            else if (op == "ifnz")
              {
                // Decrement, then put the unit back on an epsilon step.
                const CaLocation mid = c.add_location(toks[0] + "~" + toks[4] + "~"
                                                      + std::to_string(c.delta.size()));
                c.add(from, letter, {CounterOp::Dec, counter}, mid);
                c.add(mid, std::nullopt, {CounterOp::Inc, counter}, to);
              }
            else
              fail(ErrorCode::SyntaxError, "unknown instruction '" + op + "'" + where);
          }
      }
    if (!have_alphabet)
      fail(ErrorCode::SyntaxError, "missing alphabet: header");
    if (!have_counters)
      fail(ErrorCode::SyntaxError, "missing counters: header");
    if (c.size() == 0)
      fail(ErrorCode::SyntaxError, "automaton has no locations");
    c.init = init ? *c.find(*init) : 0;
    for (auto& name : accepting)
      c.accepting[*c.find(name)] = true;
    require_valid(c);
    return c;
  }

  std::string format_instruction(const Instruction& ins)
  {
    const char* op = ins.op == CounterOp::Inc ? "inc" : ins.op == CounterOp::Dec ? "dec" : "ifz";
    return std::string(op) + " " + std::to_string(ins.counter);
  }

  std::string format_ca(const CounterAutomaton& c)
  {
    std::ostringstream out;
    out << "alphabet:";
    for (auto& s : c.alphabet.symbols())
      out << ' ' << s;
    out << "\ncounters: " << c.counters << "\ninit: " << c.names.at(c.init) << "\naccepting:";
    for (CaLocation q = 0; q < c.size(); ++q)
      if (c.accepting[q])
        out << ' ' << c.names[q];
    out << "\nlocations:";
    for (auto& n : c.names)
      out << ' ' << n;
    out << '\n';
    for (const auto& d : c.delta)
      out << c.names[d.from] << ' ' << (d.letter ? c.alphabet.symbol(*d.letter) : "eps") << ' '
          << format_instruction(d.instruction) << ' ' << c.names[d.to] << '\n';
    return out.str();
  }

  std::string to_dot(const CounterAutomaton& c)
  {
    std::ostringstream out;
    out << "digraph ca {\n  rankdir=LR;\n  init [shape=point];\n";
    for (CaLocation q = 0; q < c.size(); ++q)
      out << "  n" << q << " [shape=" << (c.accepting[q] ? "doublecircle" : "circle")
          << ", label=\"" << c.names[q] << "\"];\n";
    out << "  init -> n" << c.init << ";\n";
    for (const auto& d : c.delta)
      out << "  n" << d.from << " -> n" << d.to << " [label=\""
          << (d.letter ? c.alphabet.symbol(*d.letter) : "eps") << ", "
          << format_instruction(d.instruction) << "\"];\n";
    out << "}\n";
    return out.str();
  }

  std::string format_ca_state(const CounterAutomaton& c, const CaState& s)
  {
    std::ostringstream out;
    out << '<' << c.names.at(s.location) << ", (";
    for (std::size_t i = 0; i < s.values.size(); ++i)
      out << (i ? "," : "") << s.values[i];
    out << ")>";
    return out.str();
  }
}
