/** Live round trips against a real `tmsca serve` process.
 *
 * Requires the Python package on PATH (pip install -e ..). Each suite
 * spawns the server on its own port, drives it through the same view
 * model the browser uses, and checks the console's view against the
 * engine's behavior.
 */

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, ChildProcess } from 'node:child_process';
import { mkdtempSync, readFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';
import WebSocket from 'ws';

import { ServerFrame, StateUpdate, isHello, isStateUpdate, parseServerFrame } from '../src/protocol.js';
import { ConsoleViewModel } from '../src/viewmodel.js';

const FIXTURES = fileURLToPath(new URL('./fixtures', import.meta.url));
const DT = 0.05;

interface Harness {
  proc: ChildProcess;
  ws: WebSocket;
  vm: ConsoleViewModel;
  logPath: string;
  frames: ServerFrame[];
  stop: () => Promise<void>;
  nextUpdate: (vehicleId: string, timeoutMs?: number) => Promise<StateUpdate>;
}

async function startServer(fixture: string, port: number): Promise<Harness> {
  const logPath = join(mkdtempSync(join(tmpdir(), 'tmsca-')), 'events.ndjson');
  const proc = spawn('tmsca', [
    'serve', join(FIXTURES, fixture),
    '--listen', `127.0.0.1:${port}`, '--log', logPath,
  ], { stdio: ['ignore', 'pipe', 'pipe'] });

  const ws = await new Promise<WebSocket>((resolve, reject) => {
    const deadline = Date.now() + 20_000;
    const attempt = () => {
      const candidate = new WebSocket(`ws://127.0.0.1:${port}/ws`);
      candidate.on('open', () => resolve(candidate));
      candidate.on('error', () => {
        candidate.terminate();
        if (Date.now() > deadline) reject(new Error('server never came up'));
        else setTimeout(attempt, 250);
      });
    };
    attempt();
  });

  const vm = new ConsoleViewModel();
  vm.onOpen();
  const frames: ServerFrame[] = [];
  const waiters: Array<(frame: ServerFrame) => void> = [];
  let sawHello: (() => void) | null = null;
  const helloArrived = new Promise<void>((resolve) => { sawHello = resolve; });
  ws.on('message', (data) => {
    const frame = parseServerFrame(data.toString());
    if (frame === null) return;
    vm.onFrame(frame);
    frames.push(frame);
    if (isHello(frame)) sawHello?.();
    for (const waiter of waiters.splice(0)) waiter(frame);
  });
  await helloArrived; // vehicle list populated, first vehicle auto-selected

  const nextUpdate = (vehicleId: string, timeoutMs = 15_000) =>
    new Promise<StateUpdate>((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error(`no update for ${vehicleId}`)), timeoutMs);
      const check = (frame: ServerFrame) => {
        if (isStateUpdate(frame) && frame.vehicle_id === vehicleId) {
          clearTimeout(timer);
          resolve(frame);
        } else {
          waiters.push(check);
        }
      };
      waiters.push(check);
    });

  const stop = () =>
    new Promise<void>((resolve) => {
      ws.close();
      proc.on('exit', () => resolve());
      proc.kill('SIGINT');
    });

  return { proc, ws, vm, logPath, frames, stop, nextUpdate };
}

function send(h: Harness, command: object | null): void {
  expect(command).not.toBeNull();
  h.ws.send(JSON.stringify(command));
}

describe('console round trip (criterion 8)', () => {
  let h: Harness;

  beforeAll(async () => {
    h = await startServer('table1_console.json', 8941);
  }, 30_000);

  afterAll(async () => {
    await h.stop();
  }, 30_000);

  it('throttle command reflected within 2 ticks', async () => {
    expect(h.vm.view().selectedId).toBe('car1');
    const before = await h.nextUpdate('car1');
    expect(before.speed_mps).toBe(0);
    send(h, h.vm.buildThrottle(1.0));

    let lastStill = before;
    let moving: StateUpdate | null = null;
    const deadline = Date.now() + 10_000;
    while (Date.now() < deadline) {
      const update = await h.nextUpdate('car1');
      if (update.speed_mps > 0) {
        moving = update;
        break;
      }
      lastStill = update;
    }
    expect(moving).not.toBeNull();
    expect(moving!.t - lastStill.t).toBeLessThanOrEqual(2 * DT + 1e-9);
  }, 20_000);

  it('school zone shows badge and clamp marker within one update', async () => {
    const deadline = Date.now() + 60_000;
    let update: StateUpdate;
    do {
      update = await h.nextUpdate('car1', 60_000);
      if (Date.now() > deadline) throw new Error('never entered the school zone');
    } while (update.active_mode !== 'school_zone');
    // that single update is already in the view model: badge + marker set
    const view = h.vm.view();
    expect(view.modeBadge).toBe('SCHOOL ZONE');
    expect(view.clampFraction).toBeCloseTo(0.5);
    expect(update.clamp_mps).toBeCloseTo(10.0);
  }, 70_000);

  it('buzzer renders the alert banner', async () => {
    // the full-throttle run alerts on zone entries; one was seen by now or soon
    let banner = h.frames.some((f) => isStateUpdate(f) && f.buzzer);
    const deadline = Date.now() + 30_000;
    while (!banner && Date.now() < deadline) {
      const update = await h.nextUpdate('car1', 30_000);
      if (update.buzzer) {
        expect(h.vm.view().alertBannerVisible).toBe(true);
        banner = true;
      }
    }
    expect(banner).toBe(true);
  }, 40_000);
});

describe('ambulance console flow (criterion 9)', () => {
  let h: Harness;

  beforeAll(async () => {
    h = await startServer('ambulance_console.json', 8942);
  }, 30_000);

  it('green then red on the light indicator, matching the engine log', async () => {
    expect(h.vm.view().selectedKind).toBe('ambulance');
    send(h, h.vm.buildAmbulanceToggle());
    send(h, h.vm.buildThrottle(1.0));

    const observed: string[] = [];
    const deadline = Date.now() + 60_000;
    let sawGreenBefore = false;
    let sawRedAfter = false;
    while (Date.now() < deadline && !sawRedAfter) {
      const update = await h.nextUpdate('amb1', 60_000);
      const light = h.vm.view().light;
      if (observed[observed.length - 1] !== light) observed.push(light);
      if (light === 'green' && update.position_m < 150) sawGreenBefore = true;
      if (sawGreenBefore && light === 'red' && update.position_m > 150) {
        sawRedAfter = true;
      }
    }
    expect(sawGreenBefore).toBe(true);
    expect(sawRedAfter).toBe(true);

    await h.stop();
    const lightChanges = readFileSync(h.logPath, 'utf-8')
      .split('\n')
      .filter((line) => line.length > 0)
      .map((line) => JSON.parse(line))
      .filter((event) => event.kind === 'LightChanged')
      .map((event) => event.detail.color);
    expect(lightChanges).toEqual(['green', 'red']);
    // the console saw exactly the engine's sequence: red (idle), green, red
    expect(observed.filter((c) => c !== 'none')).toEqual(['red', 'green', 'red']);
  }, 90_000);
});
