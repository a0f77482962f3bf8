// Copyright 2026 The cfcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFC_PBM_HPP
#define CFC_PBM_HPP

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cfc/messaging.hpp"

namespace cfc {

/// Plain (P1) portable bitmap codec. A datum of 1 is stored for a logic-1
/// (white) pixel, so the file holds the message bits verbatim.
inline constexpr std::size_t kPbmMaxLineLength = 70;
inline constexpr std::size_t kPbmMaxPixels = std::size_t{1} << 28;

class PbmError : public std::runtime_error {
   public:
    PbmError(const std::string &what, std::size_t line, std::size_t column)
        : std::runtime_error("pbm:" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {
    }
    std::size_t line() const {
        return line_;
    }
    std::size_t column() const {
        return column_;
    }

   private:
    std::size_t line_;
    std::size_t column_;
};

inline std::string encode_pbm(const BitmapMessage &msg) {
    std::string out = "P1\n" + std::to_string(msg.width()) + " " + std::to_string(msg.height()) + "\n";
    for (std::size_t y = 0; y < msg.height(); ++y) {
        std::size_t line_len = 0;
        for (std::size_t x = 0; x < msg.width(); ++x) {
            if (line_len > 0) {
                if (line_len + 2 > kPbmMaxLineLength) {
                    out += '\n';
                    line_len = 0;
                } else {
                    out += ' ';
                    ++line_len;
                }
            }
            out += msg.at(x, y) ? '1' : '0';
            ++line_len;
        }
        out += '\n';
    }
    return out;
}

namespace detail {

class PbmReader {
   public:
    explicit PbmReader(std::string_view text) : text_(text) {
    }

    [[noreturn]] void fail(const std::string &what) const {
        throw PbmError(what, line_, column_);
    }

    bool at_end() const {
        return pos_ >= text_.size();
    }

    char peek() const {
        return text_[pos_];
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') {
                    advance();
                }
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
                advance();
            } else {
                return;
            }
        }
    }

    std::size_t read_dimension(const char *name) {
        skip_space_and_comments();
        if (at_end()) {
            fail(std::string("truncated header: missing ") + name);
        }
        if (peek() < '0' || peek() > '9') {
            fail(std::string("expected ") + name + ", found '" + peek() + "'");
        }
        std::size_t value = 0;
        while (!at_end() && peek() >= '0' && peek() <= '9') {
            value = value * 10 + static_cast<std::size_t>(peek() - '0');
            if (value > kPbmMaxPixels) {
                fail(std::string(name) + " too large");
            }
            advance();
        }
        if (value == 0) {
            fail(std::string(name) + " must be >= 1");
        }
        return value;
    }

   private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

}  // namespace detail

inline BitmapMessage decode_pbm(std::string_view text) {
    detail::PbmReader r(text);
    if (text.size() < 2 || text[0] != 'P') {
        r.fail("bad magic, expected \"P1\"");
    }
    if (text[1] != '1') {
        r.fail(std::string("unsupported format \"P") + text[1] + "\", only plain P1 is accepted");
    }
    r.advance();
    r.advance();
    if (!r.at_end() && r.peek() != '#' && !std::isspace(static_cast<unsigned char>(r.peek()))) {
        r.fail("bad magic, expected whitespace after \"P1\"");
    }
    const std::size_t width = r.read_dimension("width");
    const std::size_t height = r.read_dimension("height");
    if (width > kPbmMaxPixels / height) {
        r.fail("dimension overflow: " + std::to_string(width) + "x" + std::to_string(height));
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(width * height);
    while (bits.size() < width * height) {
        r.skip_space_and_comments();
        if (r.at_end()) {
            r.fail("truncated data: got " + std::to_string(bits.size()) + " of " + std::to_string(width * height) + " pixels");
        }
        char c = r.peek();
        if (c != '0' && c != '1') {
            r.fail(std::string("unexpected character '") + c + "' in pixel data");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
        r.advance();
    }
    r.skip_space_and_comments();
    if (!r.at_end()) {
        r.fail("trailing data after " + std::to_string(width * height) + " pixels");
    }
    return {width, height, std::move(bits)};
}

inline BitmapMessage read_pbm_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_pbm(buf.str());
}

inline void write_pbm_file(const std::string &path, const BitmapMessage &msg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << encode_pbm(msg);
    if (!out) {
        throw std::runtime_error("write failed for " + path);
    }
}

}  // namespace cfc

#endif
