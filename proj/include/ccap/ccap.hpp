// Copyright 2026 The ccap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CCAP_CCAP_HPP_
#define CCAP_CCAP_HPP_

#include "ccap/analysis.hpp"
#include "ccap/equation.hpp"
#include "ccap/ingest.hpp"
#include "ccap/model.hpp"
#include "ccap/report.hpp"
#include "ccap/solver.hpp"

#endif  // CCAP_CCAP_HPP_
