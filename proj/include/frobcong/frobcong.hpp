#pragma once

#include "frobcong/arith.hpp"
#include "frobcong/congruence.hpp"
#include "frobcong/error.hpp"
#include "frobcong/eta.hpp"
#include "frobcong/forms.hpp"
#include "frobcong/frobenius.hpp"
#include "frobcong/galois.hpp"
#include "frobcong/hecke.hpp"
#include "frobcong/linalg.hpp"
#include "frobcong/newform.hpp"
#include "frobcong/ntt.hpp"
#include "frobcong/rings.hpp"
#include "frobcong/series.hpp"
