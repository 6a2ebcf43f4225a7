#pragma once

#include "smoothsdp/sym_matrix.hpp"
#include "smoothsdp/eigensolvers.hpp"
#include "smoothsdp/random_orthogonal.hpp"
#include "smoothsdp/smoothing.hpp"
#include "smoothsdp/nesterov.hpp"
#include "smoothsdp/affine_operator.hpp"
#include "smoothsdp/projections.hpp"
#include "smoothsdp/spectral_oracle.hpp"
#include "smoothsdp/maxeig_ball.hpp"
#include "smoothsdp/sparse_pca.hpp"
#include "smoothsdp/spectral_laws.hpp"
#include "smoothsdp/random_instances.hpp"
#include "smoothsdp/instance_io.hpp"
#include "smoothsdp/run_record.hpp"
#include "smoothsdp/harness.hpp"
