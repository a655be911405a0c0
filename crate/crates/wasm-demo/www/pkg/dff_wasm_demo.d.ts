/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    estimate_at(x: number, y: number): number;
    estimate_rgba(): Uint8Array;
    hypotheses(): Float64Array;
    in_bin_rate(): number;
    /**
     * Renders a texture over a depth ramp (or a plane when `near == far`)
     * and estimates its depth.
     */
    constructor(preset: string, size: number, near: number, far: number, noise_sigma: number, window_radius: number, depth_samples: number);
    /**
     * Finished cost profile at `(x, y)`; empty outside the image.
     */
    profile(x: number, y: number): Float64Array;
    size(): number;
    stack_len(): number;
    stack_rgba(i: number): Uint8Array;
    truth_at(x: number, y: number): number;
    truth_rgba(): Uint8Array;
}

export function coc_curves(preset: string, depth_min: number, depth_max: number, samples: number): Float64Array;

/**
 * Focus distances of a preset.
 */
export function focus_distances(preset: string): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly coc_curves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly demo_estimate_at: (a: number, b: number, c: number) => number;
    readonly demo_estimate_rgba: (a: number) => [number, number];
    readonly demo_hypotheses: (a: number) => [number, number];
    readonly demo_in_bin_rate: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly demo_profile: (a: number, b: number, c: number) => [number, number];
    readonly demo_size: (a: number) => number;
    readonly demo_stack_len: (a: number) => number;
    readonly demo_stack_rgba: (a: number, b: number) => [number, number];
    readonly demo_truth_at: (a: number, b: number, c: number) => number;
    readonly demo_truth_rgba: (a: number) => [number, number];
    readonly focus_distances: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
