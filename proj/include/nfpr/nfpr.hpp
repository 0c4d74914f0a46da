// SPDX-License-Identifier: Apache-2.0
//
// nfpr - near-field passive radar imaging toolkit
// Copyright (C) 2026 The nfpr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NFPR_NFPR_HPP
#define NFPR_NFPR_HPP

#include "nfpr/types.hpp"
#include "nfpr/parallel.hpp"
#include "nfpr/grids.hpp"
#include "nfpr/scene.hpp"
#include "nfpr/dipole.hpp"
#include "nfpr/forward.hpp"
#include "nfpr/fft.hpp"
#include "nfpr/pws.hpp"
#include "nfpr/image.hpp"
#include "nfpr/combine.hpp"
#include "nfpr/metrics.hpp"
#include "nfpr/export.hpp"
#include "nfpr/config.hpp"
#include "nfpr/presets.hpp"
#include "nfpr/pipeline.hpp"

#endif
