/* tslint:disable */
/* eslint-disable */

/**
 * Unnormalized target with its majorizer and minorizer on a grid.
 */
export class Curves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Exact rejection probability of the proposal.
     */
    readonly bound: number;
    readonly knots: Float64Array;
    readonly lower: Float64Array;
    readonly target: Float64Array;
    readonly upper: Float64Array;
    readonly x: Float64Array;
}

/**
 * Histogram of accepted draws next to the exact bin probabilities.
 */
export class Histogram {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly edges: Float64Array;
    /**
     * Target probability of each bin.
     */
    readonly expected: Float64Array;
    /**
     * Fraction of draws in each bin.
     */
    readonly observed: Float64Array;
    readonly rejection_fraction: number;
}

export function envelope_curves(d: number, kappa: number, regions: number, linear: boolean, points: number): Curves;

export function refinement_trace(d: number, kappa: number, regions: number, linear: boolean, greedy: boolean, seed: number): Float64Array;

export function sample_histogram(d: number, kappa: number, regions: number, linear: boolean, n: number, bins: number, seed: number): Histogram;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curves_free: (a: number, b: number) => void;
    readonly __wbg_histogram_free: (a: number, b: number) => void;
    readonly curves_bound: (a: number) => number;
    readonly curves_knots: (a: number) => [number, number];
    readonly curves_lower: (a: number) => [number, number];
    readonly curves_target: (a: number) => [number, number];
    readonly curves_upper: (a: number) => [number, number];
    readonly curves_x: (a: number) => [number, number];
    readonly envelope_curves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly histogram_edges: (a: number) => [number, number];
    readonly histogram_expected: (a: number) => [number, number];
    readonly histogram_observed: (a: number) => [number, number];
    readonly refinement_trace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly sample_histogram: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly histogram_rejection_fraction: (a: number) => number;
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
