#include <dw/error.hh>
#include <dw/word.hh>

#include <sstream>

namespace dw
{
  const char* error_code_name(ErrorCode code)
  {
    switch (code)
      {
      case ErrorCode::EmptyWord: return "EmptyWord";
      case ErrorCode::NotAPartition: return "NotAPartition";
      case ErrorCode::UnknownLetter: return "UnknownLetter";
      case ErrorCode::PositionOutOfRange: return "PositionOutOfRange";
      case ErrorCode::ForeignValuation: return "ForeignValuation";
      case ErrorCode::SyntaxError: return "SyntaxError";
      case ErrorCode::UnknownAtom: return "UnknownAtom";
      case ErrorCode::NotASentence: return "NotASentence";
      case ErrorCode::UnboundVariable: return "UnboundVariable";
      case ErrorCode::NotSimpleFragment: return "NotSimpleFragment";
      case ErrorCode::NotTwoVariable: return "NotTwoVariable";
      case ErrorCode::WrongFreeVariable: return "WrongFreeVariable";
      case ErrorCode::ClassMismatch: return "ClassMismatch";
      case ErrorCode::UnsupportedClassCombination: return "UnsupportedClassCombination";
      case ErrorCode::StateSpaceBudgetExceeded: return "StateSpaceBudgetExceeded";
      case ErrorCode::CapExceeded: return "CapExceeded";
      case ErrorCode::PreconditionViolation: return "PreconditionViolation";
      case ErrorCode::InvalidAutomaton: return "InvalidAutomaton";
      }
    return "?";
  }

  Alphabet::Alphabet(std::vector<std::string> symbols)
    : symbols_(std::move(symbols))
  {
    for (Letter a = 0; a < symbols_.size(); ++a)
      {
        if (symbols_[a].empty())
          fail(ErrorCode::UnknownLetter, "empty symbol in alphabet");
        if (!index_.emplace(symbols_[a], a).second)
          fail(ErrorCode::UnknownLetter, "duplicate symbol '" + symbols_[a] + "'");
      }
  }

  std::optional<Letter> Alphabet::find(std::string_view s) const
  {
    auto it = index_.find(std::string(s));
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  Letter Alphabet::at(std::string_view s) const
  {
    if (auto a = find(s))
      return *a;
    fail(ErrorCode::UnknownLetter, "unknown letter '" + std::string(s) + "'");
  }

  DataWord::DataWord(std::vector<Letter> letters, const std::vector<std::uint32_t>& classes)
    : letters_(std::move(letters))
  {
    if (letters_.empty())
      fail(ErrorCode::EmptyWord, "data words are nonempty");
    if (classes.size() != letters_.size())
      fail(ErrorCode::NotAPartition, "class labels do not match word length");
    std::unordered_map<std::uint32_t, std::uint32_t> rename;
    classes_.reserve(classes.size());
    for (auto c : classes)
      {
        auto [it, fresh] = rename.emplace(c, static_cast<std::uint32_t>(rename.size()));
        classes_.push_back(it->second);
      }
    num_classes_ = rename.size();
  }

  Letter DataWord::letter(std::size_t i) const
  {
    if (i >= length())
      fail(ErrorCode::PositionOutOfRange, "position " + std::to_string(i) + " out of range");
    return letters_[i];
  }

  ClassId DataWord::class_of(std::size_t i) const
  {
    if (i >= length())
      fail(ErrorCode::PositionOutOfRange, "position " + std::to_string(i) + " out of range");
    return ClassId{classes_[i]};
  }

  bool DataWord::same_class(std::size_t i, std::size_t j) const
  {
    return class_of(i) == class_of(j);
  }

  std::vector<std::vector<std::size_t>> DataWord::blocks() const
  {
    std::vector<std::vector<std::size_t>> out(num_classes_);
    for (std::size_t i = 0; i < length(); ++i)
      out[classes_[i]].push_back(i);
    return out;
  }

  DataWord make_data_word(std::vector<Letter> letters,
                          const std::vector<std::vector<std::size_t>>& blocks,
                          std::size_t alphabet_size)
  {
    if (letters.empty())
      fail(ErrorCode::EmptyWord, "data words are nonempty");
    for (auto a : letters)
      if (a >= alphabet_size)
        fail(ErrorCode::UnknownLetter, "letter index out of alphabet");
    const std::uint32_t unset = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> cls(letters.size(), unset);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      {
        if (blocks[b].empty())
          fail(ErrorCode::NotAPartition, "empty block");
        for (auto p : blocks[b])
          {
            if (p >= letters.size())
              fail(ErrorCode::NotAPartition, "block position " + std::to_string(p) + " out of range");
            if (cls[p] != unset)
              fail(ErrorCode::NotAPartition, "position " + std::to_string(p) + " in two blocks");
            cls[p] = static_cast<std::uint32_t>(b);
          }
      }
    for (std::size_t p = 0; p < cls.size(); ++p)
      if (cls[p] == unset)
        fail(ErrorCode::NotAPartition, "position " + std::to_string(p) + " in no block");
    return DataWord(std::move(letters), cls);
  }

  DataWord make_data_word(const Alphabet& sigma, const std::vector<std::string>& letters,
                          const std::vector<std::vector<std::size_t>>& blocks)
  {
    std::vector<Letter> ls;
    for (auto& s : letters)
      ls.push_back(sigma.at(s));
    return make_data_word(std::move(ls), blocks, sigma.size());
  }

  DataWord parse_data_word(std::string_view text, const Alphabet& sigma)
  {
    auto semi = text.find(';');
    std::vector<std::string> letters;
    {
      std::istringstream in(std::string(text.substr(0, semi)));
      std::string tok;
      while (in >> tok)
        letters.push_back(tok);
    }
    std::vector<std::vector<std::size_t>> blocks;
    if (semi == std::string_view::npos)
      {
        // No partition given: every position is its own class.
        for (std::size_t i = 0; i < letters.size(); ++i)
          blocks.push_back({i});
      }
    else
      {
        std::string rest(text.substr(semi + 1));
        std::istringstream in(rest);
        std::string block;
        while (std::getline(in, block, '|'))
          {
            std::istringstream bin(block);
            std::vector<std::size_t> b;
            std::string tok;
            while (bin >> tok)
              {
                std::size_t used = 0;
                unsigned long v = 0;
                try
                  {
                    v = std::stoul(tok, &used);
                  }
                catch (const std::exception&)
                  {
                    used = 0;
                  }
                if (used != tok.size())
                  fail(ErrorCode::SyntaxError, "bad position '" + tok + "'");
                b.push_back(v);
              }
            blocks.push_back(std::move(b));
          }
      }
    return make_data_word(sigma, letters, blocks);
  }

  std::string format_data_word(const DataWord& w, const Alphabet& sigma)
  {
    std::string out;
    for (std::size_t i = 0; i < w.length(); ++i)
      {
        if (i)
          out += ' ';
        out += sigma.symbol(w.letter(i));
      }
    out += " ;";
    bool first = true;
    for (auto& b : w.blocks())
      {
        if (!first)
          out += " |";
        first = false;
        for (auto p : b)
          out += ' ' + std::to_string(p);
      }
    return out;
  }

  std::uint64_t bell_number(unsigned n)
  {
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (unsigned i = 0; i < n; ++i)
      {
        std::vector<std::uint64_t> next{row.back()};
        for (auto x : row)
          next.push_back(next.back() + x);
        row = std::move(next);
      }
    return row.front();
  }

  DataWordEnumerator::DataWordEnumerator(std::size_t alphabet_size, std::size_t max_len,
                                         std::size_t min_len)
    : sigma_(alphabet_size), max_len_(max_len), len_(min_len < 1 ? 1 : min_len)
  {
  }

  bool DataWordEnumerator::advance_partition()
  {
    // Next restricted growth string of the same length.
    for (std::size_t i = rgs_.size(); i-- > 1;)
      {
        std::uint32_t mx = 0;
        for (std::size_t j = 0; j < i; ++j)
          mx = std::max(mx, rgs_[j]);
        if (rgs_[i] <= mx)
          {
            ++rgs_[i];
            for (std::size_t j = i + 1; j < rgs_.size(); ++j)
              rgs_[j] = 0;
            return true;
          }
      }
    return false;
  }

  bool DataWordEnumerator::advance_string()
  {
    for (std::size_t i = str_.size(); i-- > 0;)
      {
        if (str_[i] + 1 < sigma_)
          {
            ++str_[i];
            for (std::size_t j = i + 1; j < str_.size(); ++j)
              str_[j] = 0;
            return true;
          }
      }
    return false;
  }

  bool DataWordEnumerator::next()
  {
    if (sigma_ == 0)
      return false;
    if (!started_)
      {
        started_ = true;
        if (len_ > max_len_)
          return false;
        str_.assign(len_, 0);
        rgs_.assign(len_, 0);
      }
    else if (!advance_partition())
      {
        rgs_.assign(len_, 0);
        if (!advance_string())
          {
            if (++len_ > max_len_)
              return false;
            str_.assign(len_, 0);
            rgs_.assign(len_, 0);
          }
      }
    current_.emplace(str_, rgs_);
    return true;
  }

  void for_each_data_word(std::size_t alphabet_size, std::size_t max_len,
                          const std::function<void(const DataWord&)>& fn,
                          std::size_t min_len)
  {
    DataWordEnumerator e(alphabet_size, max_len, min_len);
    while (e.next())
      fn(e.current());
  }

  std::vector<Letter> project_string(const DataWord& w,
                                     const std::vector<std::optional<Letter>>& h)
  {
    std::vector<Letter> out;
    for (auto a : w.letters())
      {
        if (a >= h.size())
          fail(ErrorCode::UnknownLetter, "projection undefined on letter");
        if (h[a])
          out.push_back(*h[a]);
      }
    return out;
  }
}
