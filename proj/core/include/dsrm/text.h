// Copyright 2026 The DSRM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSRM_TEXT_H_
#define DSRM_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace dsrm {

// Splits on ASCII non-alphanumeric bytes and lowercases ASCII letters.
// Bytes >= 0x80 are kept inside tokens so UTF-8 words are not split apart.
// Shared by word hashing, tf-idf and mention contexts.
std::vector<std::string> Tokenize(std::string_view text);

}  // namespace dsrm

#endif  // DSRM_TEXT_H_
