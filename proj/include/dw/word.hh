#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dw
{
  using Letter = std::uint32_t;

  /// Ordered finite set of symbols.  Letters are indices into it.
  class Alphabet
  {
  public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    const std::string& symbol(Letter a) const { return symbols_.at(a); }
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::optional<Letter> find(std::string_view s) const;
    /// Throws UnknownLetter.
    Letter at(std::string_view s) const;

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

  private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, Letter> index_;
  };

  struct ClassId
  {
    std::uint32_t index = 0;
    friend bool operator==(ClassId, ClassId) = default;
    friend auto operator<=>(ClassId, ClassId) = default;
  };

  /// A nonempty word together with an equivalence relation on its
  /// positions.  Classes are numbered by their least member.
  class DataWord
  {
  public:
    /// \a classes gives an arbitrary class label per position; labels are
    /// renumbered canonically.
    DataWord(std::vector<Letter> letters, const std::vector<std::uint32_t>& classes);

    std::size_t length() const { return letters_.size(); }
    Letter letter(std::size_t i) const;
    ClassId class_of(std::size_t i) const;
    std::size_t num_classes() const { return num_classes_; }
    bool same_class(std::size_t i, std::size_t j) const;
    const std::vector<Letter>& letters() const { return letters_; }
    /// Restricted growth string: class index of every position.
    const std::vector<std::uint32_t>& classes() const { return classes_; }
    std::vector<std::vector<std::size_t>> blocks() const;

    bool operator==(const DataWord& o) const = default;

  private:
    std::vector<Letter> letters_;
    std::vector<std::uint32_t> classes_;
    std::size_t num_classes_ = 0;
  };

  DataWord make_data_word(const Alphabet& sigma, const std::vector<std::string>& letters,
                          const std::vector<std::vector<std::size_t>>& blocks);
  DataWord make_data_word(std::vector<Letter> letters,
                          const std::vector<std::vector<std::size_t>>& blocks,
                          std::size_t alphabet_size);

  /// `a a b ; 0 2 | 1`
  DataWord parse_data_word(std::string_view text, const Alphabet& sigma);
  std::string format_data_word(const DataWord& w, const Alphabet& sigma);

  std::uint64_t bell_number(unsigned n);

  /// Streams all data words of length 1..max_len: by length, then string
  /// in lexicographic letter order, then partition in restricted growth
  /// string order.
  class DataWordEnumerator
  {
  public:
    DataWordEnumerator(std::size_t alphabet_size, std::size_t max_len,
                       std::size_t min_len = 1);
    /// Advances; false when exhausted.
    bool next();
    const DataWord& current() const { return *current_; }

  private:
    bool advance_partition();
    bool advance_string();

    std::size_t sigma_;
    std::size_t max_len_;
    std::size_t len_;
    std::vector<Letter> str_;
    std::vector<std::uint32_t> rgs_;
    std::optional<DataWord> current_;
    bool started_ = false;
  };

  void for_each_data_word(std::size_t alphabet_size, std::size_t max_len,
                          const std::function<void(const DataWord&)>& fn,
                          std::size_t min_len = 1);

  /// Letterwise image; nullopt entries erase.
  std::vector<Letter> project_string(const DataWord& w,
                                     const std::vector<std::optional<Letter>>& h);
}
