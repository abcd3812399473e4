#include "efviz/config_text.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>

#include "efviz/errors.hpp"

namespace efviz::text {

namespace {

[[noreturn]] void fail(int line, const std::string& msg)
{
    throw ConfigError(msg, line);
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Table document()
    {
        Table root;
        Table* current = &root;
        while (true) {
            skip_blank_lines();
            if (at_end())
                break;
            if (peek() == '[') {
                ++pos_;
                skip_spaces();
                const int line = line_;
                std::vector<std::string> path = dotted_key();
                skip_spaces();
                expect(']');
                end_of_line();
                current = &root;
                for (std::size_t i = 0; i < path.size(); ++i) {
                    auto [it, inserted] = current->try_emplace(path[i], Value{Table{}, line});
                    if (!it->second.is_table())
                        fail(line, "'" + path[i] + "' is already a value, not a table");
                    if (!inserted && i + 1 == path.size() && defined_tables_.count(joined(path)))
                        fail(line, "table [" + joined(path) + "] defined twice");
                    current = &std::get<Table>(it->second.data);
                }
                defined_tables_.insert({joined(path), line});
                continue;
            }
            const int line = line_;
            std::vector<std::string> path = dotted_key();
            skip_spaces();
            expect('=');
            skip_spaces();
            Value v = value();
            end_of_line();
            assign(*current, path, std::move(v), line);
        }
        return root;
    }

private:
    static std::string joined(const std::vector<std::string>& p)
    {
        std::string s;
        for (const auto& k : p)
            s += (s.empty() ? "" : ".") + k;
        return s;
    }

    void assign(Table& into, const std::vector<std::string>& path, Value v, int line)
    {
        Table* t = &into;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            auto [it, _] = t->try_emplace(path[i], Value{Table{}, line});
            if (!it->second.is_table())
                fail(line, "'" + path[i] + "' is already a value, not a table");
            t = &std::get<Table>(it->second.data);
        }
        if (t->count(path.back()))
            fail(line, "duplicate key '" + path.back() + "'");
        (*t)[path.back()] = std::move(v);
    }

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return at_end() ? '\0' : src_[pos_]; }

    void expect(char c)
    {
        if (peek() != c)
            fail(line_, std::string("expected '") + c + "'" + (at_end() ? " before end of file" : ""));
        ++pos_;
    }

    void skip_spaces()
    {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r'))
            ++pos_;
    }

    void skip_comment()
    {
        if (peek() == '#')
            while (!at_end() && peek() != '\n')
                ++pos_;
    }

    // Whitespace, comments and newlines (used inside arrays and between lines).
    void skip_blank_lines()
    {
        while (true) {
            skip_spaces();
            skip_comment();
            if (peek() == '\n') {
                ++pos_;
                ++line_;
                continue;
            }
            break;
        }
    }

    void end_of_line()
    {
        skip_spaces();
        skip_comment();
        if (at_end())
            return;
        if (peek() != '\n')
            fail(line_, std::string("unexpected '") + peek() + "' after value");
        ++pos_;
        ++line_;
    }

    std::string bare_key()
    {
        if (peek() == '"')
            return quoted();
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
            ++pos_;
        if (pos_ == start)
            fail(line_, at_end() ? "expected a key" : std::string("expected a key, found '") + peek() + "'");
        return std::string(src_.substr(start, pos_ - start));
    }

    std::vector<std::string> dotted_key()
    {
        std::vector<std::string> path{bare_key()};
        skip_spaces();
        while (peek() == '.') {
            ++pos_;
            skip_spaces();
            path.push_back(bare_key());
            skip_spaces();
        }
        return path;
    }

    std::string quoted()
    {
        expect('"');
        std::string s;
        while (true) {
            if (at_end() || peek() == '\n')
                fail(line_, "unterminated string");
            char c = src_[pos_++];
            if (c == '"')
                break;
            if (c == '\\') {
                if (at_end())
                    fail(line_, "unterminated string");
                char e = src_[pos_++];
                switch (e) {
                case 'n': s += '\n'; break;
                case 't': s += '\t'; break;
                case '"': s += '"'; break;
                case '\\': s += '\\'; break;
                default: fail(line_, std::string("unknown escape '\\") + e + "'");
                }
                continue;
            }
            s += c;
        }
        return s;
    }

    Value value()
    {
        const int line = line_;
        const char c = peek();
        if (c == '"')
            return {quoted(), line};
        if (c == '[')
            return {array(), line};
        if (c == '{')
            return {inline_table(), line};
        if (src_.substr(pos_, 4) == "true" && !word_char(pos_ + 4)) {
            pos_ += 4;
            return {true, line};
        }
        if (src_.substr(pos_, 5) == "false" && !word_char(pos_ + 5)) {
            pos_ += 5;
            return {false, line};
        }
        return {number(), line};
    }

    bool word_char(std::size_t at) const
    {
        return at < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[at])) || src_[at] == '_');
    }

    double number()
    {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                             peek() == '.' || peek() == '_'))
            ++pos_;
        std::string token(src_.substr(start, pos_ - start));
        if (token.empty())
            fail(line_, at_end() ? "expected a value" : std::string("expected a value, found '") + peek() + "'");
        std::string digits;
        for (char ch : token)
            if (ch != '_')
                digits += ch;
        if (digits == "inf" || digits == "+inf")
            return std::numeric_limits<double>::infinity();
        if (digits == "-inf")
            return -std::numeric_limits<double>::infinity();
        if (digits == "nan" || digits == "+nan" || digits == "-nan")
            return std::numeric_limits<double>::quiet_NaN();
        const char* first = digits.data();
        if (*first == '+')
            ++first;
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), out);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            fail(line_, "invalid value '" + token + "'");
        return out;
    }

    Array array()
    {
        expect('[');
        Array out;
        while (true) {
            skip_blank_lines();
            if (peek() == ']') {
                ++pos_;
                return out;
            }
            if (at_end())
                fail(line_, "unterminated array");
            out.push_back(value());
            skip_blank_lines();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            if (peek() != ']')
                fail(line_, "expected ',' or ']' in array");
        }
    }

    Table inline_table()
    {
        expect('{');
        Table out;
        skip_spaces();
        if (peek() == '}') {
            ++pos_;
            return out;
        }
        while (true) {
            skip_spaces();
            const int line = line_;
            std::vector<std::string> path = dotted_key();
            skip_spaces();
            expect('=');
            skip_spaces();
            Value v = value();
            assign(out, path, std::move(v), line);
            skip_spaces();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect('}');
            return out;
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::map<std::string, int> defined_tables_;
};

std::string kind(const Value& v)
{
    if (v.is_number())
        return "number";
    if (v.is_bool())
        return "boolean";
    if (v.is_string())
        return "string";
    if (v.is_array())
        return "array";
    return "table";
}

[[noreturn]] void wrong_type(const Value& v, std::string_view what, const char* wanted)
{
    std::ostringstream os;
    os << what << ": expected " << wanted << ", got " << kind(v);
    throw ConfigError(os.str(), v.line);
}

} // namespace

double Value::number(std::string_view what) const
{
    if (!is_number())
        wrong_type(*this, what, "a number");
    return std::get<double>(data);
}

bool Value::boolean(std::string_view what) const
{
    if (!is_bool())
        wrong_type(*this, what, "a boolean");
    return std::get<bool>(data);
}

const std::string& Value::string(std::string_view what) const
{
    if (!is_string())
        wrong_type(*this, what, "a string");
    return std::get<std::string>(data);
}

const Array& Value::array(std::string_view what) const
{
    if (!is_array())
        wrong_type(*this, what, "an array");
    return std::get<Array>(data);
}

const Table& Value::table(std::string_view what) const
{
    if (!is_table())
        wrong_type(*this, what, "a table");
    return std::get<Table>(data);
}

Table parse(std::string_view source) { return Parser(source).document(); }

} // namespace efviz::text
