/** Wire contract for the /ws control channel.
 *
 * Server-to-client frames: a typed `hello` on connect, typed `rejected`
 * answers to bad commands, and untyped state updates recognized by the
 * presence of `vehicle_id`. Client-to-server frames are DriverCommand
 * objects with a strictly increasing `client_seq`.
 */

export interface VehicleInfo {
  id: string;
  kind: 'car' | 'ambulance';
  v_max_mps: number;
}

export interface BoardInfo {
  id: string;
  position_m: number;
  mode: string;
  has_light: boolean;
}

export interface HelloFrame {
  type: 'hello';
  vehicles: VehicleInfo[];
  signboards: BoardInfo[];
  dt_s: number;
  road_length_m: number;
}

export interface RejectedFrame {
  type: 'rejected';
  reason: string;
  client_seq?: number;
}

export type GovernorState = 'cruise' | 'alerted' | 'auto_brake';
export type LightState = 'green' | 'red' | 'none';

export interface StateUpdate {
  t: number;
  vehicle_id: string;
  speed_mps: number;
  clamp_mps: number;
  governor: GovernorState;
  buzzer: boolean;
  active_mode: string; // sign-mode name or "none"
  nearest_light: LightState;
  position_m: number;
}

export interface ThrottleCommand {
  type: 'throttle';
  vehicle_id: string;
  value: number;
  client_seq: number;
}

export interface AmbulanceToggleCommand {
  type: 'ambulance_toggle';
  vehicle_id: string;
  client_seq: number;
}

export type DriverCommand = ThrottleCommand | AmbulanceToggleCommand;
export type ServerFrame = HelloFrame | RejectedFrame | StateUpdate;

export function isHello(frame: unknown): frame is HelloFrame {
  return typeof frame === 'object' && frame !== null &&
    (frame as HelloFrame).type === 'hello';
}

export function isRejected(frame: unknown): frame is RejectedFrame {
  return typeof frame === 'object' && frame !== null &&
    (frame as RejectedFrame).type === 'rejected';
}

export function isStateUpdate(frame: unknown): frame is StateUpdate {
  return typeof frame === 'object' && frame !== null &&
    typeof (frame as StateUpdate).vehicle_id === 'string' &&
    typeof (frame as StateUpdate).t === 'number';
}

export function parseServerFrame(raw: string): ServerFrame | null {
  let frame: unknown;
  try {
    frame = JSON.parse(raw);
  } catch {
    return null;
  }
  if (isHello(frame) || isRejected(frame) || isStateUpdate(frame)) return frame;
  return null;
}
