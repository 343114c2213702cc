/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curves_free: (a: number, b: number) => void;
export const __wbg_histogram_free: (a: number, b: number) => void;
export const curves_bound: (a: number) => number;
export const curves_knots: (a: number) => [number, number];
export const curves_lower: (a: number) => [number, number];
export const curves_target: (a: number) => [number, number];
export const curves_upper: (a: number) => [number, number];
export const curves_x: (a: number) => [number, number];
export const envelope_curves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const histogram_edges: (a: number) => [number, number];
export const histogram_expected: (a: number) => [number, number];
export const histogram_observed: (a: number) => [number, number];
export const refinement_trace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const sample_histogram: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const histogram_rejection_fraction: (a: number) => number;
export const __externref_table_alloc: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
